#include "discrete_spencer.hpp"

#include "errors.hpp"

#include <algorithm>

namespace spencer {

namespace {

void subsets_of(int d, int p, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < d; ++i) {
    cur.push_back(i);
    subsets_of(d, p, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Position of axis i within the sorted set S u {i}, and the enlarged set.
std::pair<int, std::vector<int>> insert_axis(const std::vector<int>& s, int i) {
  std::vector<int> out = s;
  auto it = std::lower_bound(out.begin(), out.end(), i);
  const int pos = static_cast<int>(it - out.begin());
  out.insert(it, i);
  return {pos, out};
}

}  // namespace

CubicalTorus::CubicalTorus(int d, int n) : d_(d), n_(n) {
  if (d < 1 || d > 6) throw UsageError("torus dimension must be in 1..6");
  if (n < 2 || n > 64) throw UsageError("subdivisions must be in 2..64");
  for (int i = 0; i < d; ++i) vertices_ *= static_cast<std::uint64_t>(n);
  subsets_.resize(d + 1);
  subset_lookup_.resize(d + 1);
  for (int p = 0; p <= d; ++p) {
    std::vector<int> cur;
    subsets_of(d, p, 0, cur, subsets_[p]);
    for (std::size_t t = 0; t < subsets_[p].size(); ++t) subset_lookup_[p][subsets_[p][t]] = t;
  }
}

std::uint64_t CubicalTorus::cell(int p, std::uint64_t vertex, std::size_t subset) const {
  return vertex * subsets_.at(p).size() + subset;
}

std::pair<std::uint64_t, std::size_t> CubicalTorus::split(std::uint64_t cell, int p) const {
  const auto c = subsets_.at(p).size();
  return {cell / c, static_cast<std::size_t>(cell % c)};
}

std::vector<int> CubicalTorus::coords(std::uint64_t vertex) const {
  std::vector<int> x(d_);
  for (int i = 0; i < d_; ++i) {
    x[i] = static_cast<int>(vertex % n_);
    vertex /= n_;
  }
  return x;
}

std::uint64_t CubicalTorus::vertex(const std::vector<int>& x) const {
  std::uint64_t v = 0;
  for (int i = d_ - 1; i >= 0; --i) v = v * n_ + static_cast<std::uint64_t>(((x[i] % n_) + n_) % n_);
  return v;
}

std::uint64_t CubicalTorus::shift(std::uint64_t v, int axis, int step) const {
  auto x = coords(v);
  x[axis] += step;
  return vertex(x);
}

std::size_t CubicalTorus::subset_index(int p, const std::vector<int>& subset) const {
  auto it = subset_lookup_.at(p).find(subset);
  if (it == subset_lookup_[p].end()) throw UsageError("not an axis subset");
  return it->second;
}

SparseMatrix CubicalTorus::coboundary_matrix(int p) const {
  if (p < 0 || p >= d_) throw UsageError("coboundary degree out of range");
  const auto src = subsets_[p].size(), dst = subsets_[p + 1].size();
  SparseMatrix m(cell_count(p + 1), cell_count(p));
  for (std::uint64_t v = 0; v < vertices_; ++v)
    for (std::size_t s = 0; s < src; ++s) {
      std::map<std::uint32_t, Rational> col;
      for (int i = 0; i < d_; ++i) {
        if (std::binary_search(subsets_[p][s].begin(), subsets_[p][s].end(), i)) continue;
        const auto [pos, enlarged] = insert_axis(subsets_[p][s], i);
        const int sign = pos % 2 ? -1 : 1;
        const auto t = subset_index(p + 1, enlarged);
        col[static_cast<std::uint32_t>(shift(v, i, -1) * dst + t)] += sign;
        col[static_cast<std::uint32_t>(v * dst + t)] -= sign;
      }
      auto& out = m.columns[v * src + s];
      for (const auto& [r, x] : col)
        if (x != 0) out.emplace_back(r, x);
    }
  return m;
}

std::vector<std::uint64_t> CubicalTorus::cycle(int p, std::size_t subset) const {
  const auto& s = subsets_.at(p).at(subset);
  std::vector<std::uint64_t> cells;
  for (std::uint64_t v = 0; v < vertices_; ++v) {
    const auto x = coords(v);
    bool on = true;
    for (int i = 0; i < d_; ++i)
      if (x[i] != 0 && !std::binary_search(s.begin(), s.end(), i)) on = false;
    if (on) cells.push_back(v * subsets_[p].size() + subset);
  }
  return cells;
}

void SpencerCochain::add(std::uint64_t cell, const SymElement& s) {
  if (s.is_zero()) return;
  auto [it, inserted] = values.try_emplace(cell, s);
  if (!inserted) {
    it->second += s;
    if (it->second.is_zero()) values.erase(it);
  }
}

SpencerCochain coboundary(const CubicalTorus& torus, const SpencerCochain& c) {
  if (c.p < 0 || c.p >= torus.dim()) throw UsageError("coboundary needs form degree below the torus dimension");
  SpencerCochain out{c.p + 1, c.q, c.ambient_dim, {}};
  const auto dst = torus.subsets(c.p + 1).size();
  for (const auto& [cell, s] : c.values) {
    const auto [v, si] = torus.split(cell, c.p);
    const auto& subset = torus.subsets(c.p)[si];
    for (int i = 0; i < torus.dim(); ++i) {
      if (std::binary_search(subset.begin(), subset.end(), i)) continue;
      const auto [pos, enlarged] = insert_axis(subset, i);
      const Rational sign = pos % 2 ? -1 : 1;
      const auto t = torus.subset_index(c.p + 1, enlarged);
      out.add(torus.shift(v, i, -1) * dst + t, s.scaled(sign));
      out.add(v * dst + t, s.scaled(-sign));
    }
  }
  return out;
}

SpencerDifferential spencer_differential(const CubicalTorus& torus, const SpencerCochain& c,
                                         const SpencerOperator& op) {
  SpencerDifferential out;
  out.form_part = c.p < torus.dim() ? coboundary(torus, c) : SpencerCochain{c.p + 1, c.q, c.ambient_dim, {}};
  out.algebra_part = SpencerCochain{c.p, c.q + 1, c.ambient_dim, {}};
  const Rational sign = c.p % 2 ? -1 : 1;
  for (const auto& [cell, s] : c.values) out.algebra_part.add(cell, op.apply(s).scaled(sign));
  return out;
}

SpencerCochain tensor(int p, const std::vector<std::pair<std::uint64_t, Rational>>& alpha, const SymElement& s) {
  SpencerCochain out{p, s.degree, s.ambient_dim, {}};
  for (const auto& [cell, a] : alpha) out.add(cell, s.scaled(a));
  return out;
}

std::vector<std::pair<std::uint64_t, Rational>> random_scalar_cochain(const CubicalTorus& torus, int p,
                                                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-3, 3);
  std::vector<std::pair<std::uint64_t, Rational>> out;
  for (std::uint64_t c = 0; c < torus.cell_count(p); ++c)
    if (int x = dist(rng)) out.emplace_back(c, Rational(x));
  return out;
}

std::vector<std::pair<std::uint64_t, Rational>> axis_cocycle(const CubicalTorus& torus, int p, std::size_t subset) {
  std::vector<std::pair<std::uint64_t, Rational>> out;
  for (std::uint64_t v = 0; v < torus.vertex_count(); ++v)
    out.emplace_back(v * torus.subsets(p).size() + subset, Rational(1));
  return out;
}

CohomologyReport degenerate_cohomology(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                                       const EliminationOptions& elim, std::uint64_t sample_seed) {
  const int d = torus.dim();
  CohomologyReport r;
  r.torus_dim = d;
  r.subdivisions = torus.subdivisions();
  r.k = kb.k;
  r.kernel_dim = kb.dim();
  const std::uint64_t kappa = kb.dim();
  for (int p = 0; p <= d; ++p) r.cell_counts.push_back(torus.cell_count(p));
  for (int p = 0; p < d; ++p) {
    const auto dp = torus.coboundary_matrix(p);
    r.coboundary_ranks.push_back(exact_nullspace(dp, elim).rank);
    r.degenerate_ranks.push_back(kappa ? exact_nullspace(kron_identity(dp, kappa), elim).rank : 0);
  }
  auto rank_at = [&](const std::vector<std::uint64_t>& ranks, int p) {
    return p >= 0 && p < d ? ranks[p] : std::uint64_t{0};
  };
  r.product_identity_holds = true;
  for (int p = 0; p <= d; ++p) {
    r.betti.push_back(r.cell_counts[p] - rank_at(r.coboundary_ranks, p) - rank_at(r.coboundary_ranks, p - 1));
    r.degenerate_dims.push_back(r.cell_counts[p] * kappa - rank_at(r.degenerate_ranks, p) -
                                rank_at(r.degenerate_ranks, p - 1));
    if (r.degenerate_dims[p] != r.betti[p] * kappa) r.product_identity_holds = false;
  }

  r.degeneration_holds = true;
  std::mt19937_64 rng(sample_seed);
  for (std::size_t j = 0; j < kb.dim(); ++j) {
    const SymElement s = kb.element(j);
    if (!op.apply(s).is_zero()) r.degeneration_holds = false;
    if (j >= 8) continue;
    for (int p = 0; p <= d; ++p) {
      const auto alpha = random_scalar_cochain(torus, p, rng);
      const auto c = tensor(p, alpha, s);
      const auto D = spencer_differential(torus, c, op);
      ++r.degeneration_samples;
      if (!D.algebra_part.is_zero()) r.degeneration_holds = false;
      if (p < d && !(D.form_part == coboundary(torus, c))) r.degeneration_holds = false;
    }
  }
  if (!r.product_identity_holds)
    throw IdentityFailure("degenerate cohomology is not the product of de Rham cohomology with the kernel");
  return r;
}

std::int64_t euler_characteristic(const std::vector<std::uint64_t>& dims) {
  std::int64_t chi = 0;
  for (std::size_t p = 0; p < dims.size(); ++p) chi += (p % 2 ? -1 : 1) * static_cast<std::int64_t>(dims[p]);
  return chi;
}

std::int64_t euler_characteristic(const CohomologyReport& report) {
  return euler_characteristic(report.degenerate_dims);
}

bool DeRhamClass::is_zero() const {
  return std::all_of(coordinates.begin(), coordinates.end(), [](const Rational& x) { return x == 0; });
}

std::vector<Rational> kernel_coordinates(const KernelBasis& kb, const SymElement& s) {
  const MonomialIndexer idx(kb.ambient_dim, kb.k);
  std::map<std::uint64_t, Rational> by_index;
  for (const auto& [m, c] : s.terms) by_index[idx.rank(m)] = c;
  std::vector<Rational> out(kb.dim());
  for (std::size_t j = 0; j < kb.free_columns.size(); ++j) {
    auto it = by_index.find(kb.free_columns[j]);
    if (it != by_index.end()) out[j] = it->second;
  }
  return out;
}

DeRhamClass de_rham_class(const CubicalTorus& torus, int p,
                          const std::vector<std::pair<std::uint64_t, Rational>>& alpha) {
  std::map<std::uint64_t, Rational> values(alpha.begin(), alpha.end());
  DeRhamClass out;
  out.p = p;
  Rational volume = 1;
  for (int i = 0; i < p; ++i) volume *= torus.subdivisions();
  for (std::size_t t = 0; t < torus.subsets(p).size(); ++t) {
    Rational sum = 0;
    for (auto cell : torus.cycle(p, t)) {
      auto it = values.find(cell);
      if (it != values.end()) sum += it->second;
    }
    out.coordinates.push_back(sum / volume);
  }
  return out;
}

std::vector<DeRhamClass> phi_deg_all(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                                     const SpencerCochain& c) {
  if (c.q != kb.k) throw UsageError("cochain degree does not match the kernel degree");
  for (const auto& [cell, s] : c.values)
    if (!op.apply(s).is_zero()) throw UsageError("cochain is not kernel-valued");
  if (c.p < torus.dim() && !coboundary(torus, c).is_zero()) throw UsageError("cochain is not closed");
  std::vector<std::vector<std::pair<std::uint64_t, Rational>>> alpha(kb.dim());
  for (const auto& [cell, s] : c.values) {
    const auto coords = kernel_coordinates(kb, s);
    for (std::size_t j = 0; j < coords.size(); ++j)
      if (coords[j] != 0) alpha[j].emplace_back(cell, coords[j]);
  }
  std::vector<DeRhamClass> out;
  for (const auto& a : alpha) out.push_back(de_rham_class(torus, c.p, a));
  return out;
}

DeRhamClass phi_deg(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                    const SpencerCochain& c, std::size_t component) {
  if (component >= kb.dim()) throw UsageError("kernel component out of range");
  return phi_deg_all(torus, op, kb, c)[component];
}

}  // namespace spencer
