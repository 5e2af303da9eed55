#pragma once

#include "kernel_lab.hpp"
#include "linalg.hpp"
#include "spencer_ops.hpp"
#include "sym_algebra.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace spencer {

/// Cubical flat torus T^d with N subdivisions per axis. A p-cell is a vertex
/// together with a p-subset of axes; subsets are enumerated lexicographically.
class CubicalTorus {
 public:
  CubicalTorus(int d, int n);
  int dim() const { return d_; }
  int subdivisions() const { return n_; }
  std::uint64_t vertex_count() const { return vertices_; }
  std::uint64_t cell_count(int p) const { return vertices_ * subsets_.at(p).size(); }
  const std::vector<std::vector<int>>& subsets(int p) const { return subsets_.at(p); }

  std::uint64_t cell(int p, std::uint64_t vertex, std::size_t subset) const;
  std::pair<std::uint64_t, std::size_t> split(std::uint64_t cell, int p) const;
  std::vector<int> coords(std::uint64_t vertex) const;
  std::uint64_t vertex(const std::vector<int>& coords) const;
  std::uint64_t shift(std::uint64_t vertex, int axis, int step) const;
  std::size_t subset_index(int p, const std::vector<int>& subset) const;

  /// Integer coboundary C^p -> C^{p+1}.
  SparseMatrix coboundary_matrix(int p) const;
  /// Sub-torus cycle in the directions of `subset`: the cells (v, S) with v_i = 0 off S.
  std::vector<std::uint64_t> cycle(int p, std::size_t subset) const;

 private:
  int d_, n_;
  std::uint64_t vertices_ = 1;
  std::vector<std::vector<std::vector<int>>> subsets_;
  std::vector<std::map<std::vector<int>, std::size_t>> subset_lookup_;
};

/// Sym^q-valued p-cochain.
struct SpencerCochain {
  int p = 0;
  int q = 0;
  std::size_t ambient_dim = 0;
  std::map<std::uint64_t, SymElement> values;

  bool is_zero() const { return values.empty(); }
  void add(std::uint64_t cell, const SymElement& s);
  friend bool operator==(const SpencerCochain&, const SpencerCochain&) = default;
};

SpencerCochain coboundary(const CubicalTorus& torus, const SpencerCochain& c);

struct SpencerDifferential {
  SpencerCochain form_part;     // d alpha (x) s, bidegree (p+1, q)
  SpencerCochain algebra_part;  // (-1)^p alpha (x) delta(s), bidegree (p, q+1)
};
SpencerDifferential spencer_differential(const CubicalTorus& torus, const SpencerCochain& c, const SpencerOperator& op);

/// alpha (x) s for a scalar cochain alpha given as (cell, value) pairs.
SpencerCochain tensor(int p, const std::vector<std::pair<std::uint64_t, Rational>>& alpha, const SymElement& s);
/// Random integer scalar cochain with entries in [-3, 3].
std::vector<std::pair<std::uint64_t, Rational>> random_scalar_cochain(const CubicalTorus& torus, int p,
                                                                      std::mt19937_64& rng);
/// The constant cocycle dx_S: value 1 on every cell (v, S).
std::vector<std::pair<std::uint64_t, Rational>> axis_cocycle(const CubicalTorus& torus, int p, std::size_t subset);

struct CohomologyReport {
  int torus_dim = 0;
  int subdivisions = 0;
  int k = 0;
  std::uint64_t kernel_dim = 0;
  std::vector<std::uint64_t> cell_counts;
  std::vector<std::uint64_t> coboundary_ranks;
  std::vector<std::uint64_t> betti;
  std::vector<std::uint64_t> degenerate_ranks;
  std::vector<std::uint64_t> degenerate_dims;
  /// delta(s) = 0 for every kernel basis element, and the algebra part of the
  /// Spencer differential vanishes on the sampled kernel-valued cochains.
  bool degeneration_holds = false;
  std::uint64_t degeneration_samples = 0;
  bool product_identity_holds = false;
};

/// Degenerate complex: Sym^k-valued cochains restricted to ker delta^lam, with
/// differential d (x) id. Throws IdentityFailure if dim H^p_deg != b_p * dim K.
CohomologyReport degenerate_cohomology(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                                       const EliminationOptions& elim = {}, std::uint64_t sample_seed = 1);

std::int64_t euler_characteristic(const std::vector<std::uint64_t>& dims);
std::int64_t euler_characteristic(const CohomologyReport& report);

struct DeRhamClass {
  int p = 0;
  /// Coordinates against the axis classes dx_S, S in lexicographic order.
  std::vector<Rational> coordinates;
  bool is_zero() const;
};

/// Kernel coordinates of a kernel element (values at the reduced basis' free columns).
std::vector<Rational> kernel_coordinates(const KernelBasis& kb, const SymElement& s);

/// [sum_j alpha_j (x) kappa_j] -> [alpha_component]. Rejects cochains that are not
/// closed or not kernel-valued.
DeRhamClass phi_deg(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                    const SpencerCochain& c, std::size_t component);
/// Classes of every kernel component at once.
std::vector<DeRhamClass> phi_deg_all(const CubicalTorus& torus, const SpencerOperator& op, const KernelBasis& kb,
                                     const SpencerCochain& c);
/// Class of a scalar cochain by pairing with the sub-torus cycles.
DeRhamClass de_rham_class(const CubicalTorus& torus, int p, const std::vector<std::pair<std::uint64_t, Rational>>& alpha);

}  // namespace spencer
