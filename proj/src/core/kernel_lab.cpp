#include "kernel_lab.hpp"

#include "errors.hpp"

#include <algorithm>

namespace spencer {

SymElement KernelBasis::element(std::size_t i) const {
  const MonomialIndexer idx(ambient_dim, k);
  std::vector<std::pair<std::uint64_t, Rational>> coords;
  for (const auto& [c, v] : vectors.at(i)) coords.emplace_back(c, v);
  return from_coordinates(coords, idx);
}

KernelBasis kernel(const SpencerMatrix& mat, std::size_t ambient_dim, const EliminationOptions& opts) {
  KernelBasis kb;
  kb.k = mat.k_from;
  kb.ambient_dim = ambient_dim;
  kb.source_dim = mat.entries.cols;
  if (sym_dim(ambient_dim, mat.k_from) != mat.entries.cols)
    throw UsageError("matrix column count does not match Sym^" + std::to_string(mat.k_from));
  auto ns = exact_nullspace(mat.entries, opts);
  kb.rank = ns.rank;
  kb.vectors = std::move(ns.basis);
  kb.free_columns = std::move(ns.free_columns);
  kb.certificate = std::move(ns.certificate);
  return kb;
}

bool verify_kernel(const SpencerMatrix& mat, const KernelBasis& kb) {
  for (const auto& v : kb.vectors)
    if (!mat.entries.apply(v).empty()) return false;
  if (kb.rank + kb.dim() != mat.entries.cols) return false;
  return span_rank(kb.vectors, mat.entries.cols) == kb.dim();
}

MirrorStability compare_kernels(const KernelBasis& a, const KernelBasis& b) {
  MirrorStability r;
  r.dim_plus = a.dim();
  r.dim_minus = b.dim();
  std::vector<SparseVector> all = a.vectors;
  all.insert(all.end(), b.vectors.begin(), b.vectors.end());
  r.joint_rank = span_rank(all, a.source_dim);
  r.holds = r.dim_plus == r.dim_minus && r.joint_rank == r.dim_plus;
  return r;
}

MirrorStability mirror_stability_check(const DualVector& lam, const LieAlgebra& algebra, int k,
                                       const AssemblyOptions& assembly, const EliminationOptions& elim) {
  const auto plus = kernel(delta_constrained(lam, algebra, k, assembly), algebra.dim(), elim);
  const auto minus = kernel(delta_constrained(-lam, algebra, k, assembly), algebra.dim(), elim);
  return compare_kernels(plus, minus);
}

int min_irrep_dim(char family, int rank) {
  switch (family) {
    case 'G': if (rank == 2) return 7; break;
    case 'F': if (rank == 4) return 26; break;
    case 'E':
      if (rank == 6) return 27;
      if (rank == 7) return 56;
      if (rank == 8) return 248;
      break;
    case 'A': if (rank >= 1) return rank + 1; break;
    case 'B': if (rank >= 2) return std::min(2 * rank + 1, 1 << std::min(rank, 30)); break;
    case 'C': if (rank >= 2) return 2 * rank; break;
    case 'D': if (rank >= 4) return std::min(2 * rank, 1 << std::min(rank - 1, 30)); break;
    default: break;
  }
  throw UsageError("no minimal-representation entry for " + std::string(1, family) + std::to_string(rank));
}

bool min_irrep_is_extension(char family, int rank) {
  return family == 'A' || family == 'B' || family == 'C' || family == 'D' || (family == 'E' && rank == 6);
}

std::string to_string(TensionVerdict v) {
  switch (v) {
    case TensionVerdict::forced_match: return "forced_match";
    case TensionVerdict::infeasible: return "infeasible";
    case TensionVerdict::unconstrained: return "unconstrained";
  }
  return "unknown";
}

TensionReport tension_report(const CartanDatum& datum, std::int64_t h11, std::optional<std::uint64_t> kernel_dim) {
  if (h11 < 0) throw UsageError("h11 must be nonnegative");
  TensionReport r;
  r.algebra = datum.label();
  r.h11 = h11;
  r.min_irrep = min_irrep_dim(datum.family, datum.rank);
  r.lower_bound = r.min_irrep;
  r.upper_bound = h11;
  r.kernel_dim_measured = kernel_dim;
  if (r.lower_bound == r.upper_bound) {
    r.verdict = TensionVerdict::forced_match;
    r.forced_dim = r.lower_bound;
  } else if (r.lower_bound > r.upper_bound) {
    r.verdict = TensionVerdict::infeasible;
  }
  if (kernel_dim) {
    const auto kd = static_cast<std::int64_t>(*kernel_dim);
    switch (r.verdict) {
      case TensionVerdict::forced_match: r.consistent = kd == 0 || kd == *r.forced_dim; break;
      case TensionVerdict::infeasible: r.consistent = kd == 0; break;
      case TensionVerdict::unconstrained: r.consistent = kd == 0 || (kd >= r.lower_bound && kd <= r.upper_bound); break;
    }
  }
  return r;
}

}  // namespace spencer
