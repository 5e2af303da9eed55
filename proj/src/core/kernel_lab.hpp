#pragma once

#include "linalg.hpp"
#include "spencer_ops.hpp"
#include "sym_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spencer {

/// Kernel of a Spencer matrix in degree k. Vectors are coordinates in the
/// enumerate_basis order of Sym^k and come in reduced form.
struct KernelBasis {
  int k = 1;
  std::size_t ambient_dim = 0;
  std::uint64_t source_dim = 0;  // sym_dim(n, k)
  std::uint64_t rank = 0;        // rank of the operator
  std::vector<SparseVector> vectors;
  std::vector<std::uint32_t> free_columns;
  RankCertificate certificate;

  std::uint64_t dim() const { return vectors.size(); }
  SymElement element(std::size_t i) const;
};

KernelBasis kernel(const SpencerMatrix& mat, std::size_t ambient_dim, const EliminationOptions& opts = {});
/// Operator times every basis vector is zero and the basis has full rank.
bool verify_kernel(const SpencerMatrix& mat, const KernelBasis& kb);

struct MirrorStability {
  bool holds = false;
  std::uint64_t dim_plus = 0, dim_minus = 0, joint_rank = 0;
};
MirrorStability mirror_stability_check(const DualVector& lam, const LieAlgebra& algebra, int k,
                                       const AssemblyOptions& assembly = {}, const EliminationOptions& elim = {});
/// Same test for two precomputed kernels.
MirrorStability compare_kernels(const KernelBasis& a, const KernelBasis& b);

/// Smallest dimension of a nontrivial irreducible representation.
int min_irrep_dim(char family, int rank);
/// True where the minimal irrep is not in the exceptional table (classical families, E6).
bool min_irrep_is_extension(char family, int rank);

enum class TensionVerdict { forced_match, infeasible, unconstrained };
std::string to_string(TensionVerdict v);

struct TensionReport {
  std::string algebra;
  std::int64_t h11 = 0;
  int min_irrep = 0;
  std::optional<std::uint64_t> kernel_dim_measured;
  std::int64_t lower_bound = 0, upper_bound = 0;
  TensionVerdict verdict = TensionVerdict::unconstrained;
  /// Set for forced_match.
  std::optional<std::int64_t> forced_dim;
  /// Set when a measured dimension was supplied.
  std::optional<bool> consistent;
};

TensionReport tension_report(const CartanDatum& datum, std::int64_t h11,
                             std::optional<std::uint64_t> kernel_dim = std::nullopt);

}  // namespace spencer
