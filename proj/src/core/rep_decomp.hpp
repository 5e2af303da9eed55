#pragma once

#include "kernel_lab.hpp"
#include "lie_core.hpp"
#include "sym_algebra.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace spencer {

/// Cartan eigenvalues on h_1..h_r, i.e. Dynkin labels.
using Weight = std::vector<int>;
using WeightMultiset = std::map<Weight, std::int64_t>;

struct IrrepSummand {
  Weight highest_weight;
  Integer dim;
  std::int64_t multiplicity = 1;
};

/// Raised when a weight multiset cannot be the character of a module.
class CharacterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivation extension of ad_x to Sym^k.
SymElement ad_action_on_sym(const LieAlgebra& algebra, const Combination& x, const SymElement& s);

struct SubmoduleReport {
  bool holds = true;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  /// (algebra basis index, kernel vector index), first few only.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> violations;
};
SubmoduleReport is_g_submodule(const LieAlgebra& algebra, const KernelBasis& kb, std::size_t max_listed = 16);

struct WeightDecomposition {
  WeightMultiset weights;
  /// False when the weight-space ranks do not add up to the kernel dimension.
  bool cartan_stable = true;
};
WeightDecomposition weight_decomposition(const LieAlgebra& algebra, const KernelBasis& kb);
/// Weight multiset of the full Sym^k.
WeightMultiset sym_power_weights(const LieAlgebra& algebra, int k);

/// Weight data for a root system: Dynkin-label inner product and positive coroots.
class WeightLattice {
 public:
  explicit WeightLattice(const RootSystem& roots);
  int rank() const { return rank_; }
  Rational inner(const Weight& a, const Weight& b) const;
  bool dominant(const Weight& w) const;
  Weight reflect(const Weight& w, int i) const;
  /// Sum of simple-root coordinates.
  Rational height(const Weight& w) const;
  Integer weyl_dim(const Weight& highest) const;
  /// Dominant-character multiplicities of V(highest) by Freudenthal's formula.
  WeightMultiset character(const Weight& highest) const;

 private:
  int rank_;
  const RootSystem* roots_;
  std::vector<std::vector<Rational>> gram_;      // (omega_i, omega_j)
  std::vector<std::vector<Rational>> inverse_;   // A^-1
  std::vector<Weight> positive_labels_;          // Dynkin labels of positive roots
  std::vector<std::vector<int>> positive_coroots_;
  std::vector<int> positive_heights_;
};

Integer weyl_dim(const Weight& highest, const LieAlgebra& algebra);
/// Greedy highest-weight peeling. Throws CharacterError if the multiset is not
/// Weyl-symmetric or a multiplicity goes negative.
std::vector<IrrepSummand> decompose_character(const WeightMultiset& weights, const LieAlgebra& algebra);

}  // namespace spencer
