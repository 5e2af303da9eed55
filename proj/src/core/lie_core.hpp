#pragma once

#include "rational.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spencer {

/// Sparse linear combination of basis vectors, sorted by index, zero-free.
using Combination = std::vector<std::pair<std::uint32_t, Rational>>;

/// Cartan matrix in the convention A[i][j] = <alpha_j, alpha_i^vee>, so that
/// [h_i, e_j] = A[i][j] e_j. Node numbering follows Bourbaki.
struct CartanDatum {
  char family = 'A';
  int rank = 1;
  std::vector<std::vector<int>> cartan_matrix;

  std::string label() const { return std::string(1, family) + std::to_string(rank); }
};

CartanDatum standard_cartan(char family, int rank);
CartanDatum parse_algebra_label(std::string_view label);
/// Rejects malformed matrices, naming the first failing entry.
void validate_cartan(const CartanDatum& datum);

struct RootSystem {
  CartanDatum datum;
  std::vector<std::vector<int>> simple_roots;
  /// Coefficient vectors over the simple roots, ordered by height, then
  /// lexicographically descending (so simple roots appear as alpha_1..alpha_r).
  std::vector<std::vector<int>> positive_roots;
  std::size_t root_count = 0;
  /// d_i = (alpha_i, alpha_i)/2 with long roots normalized to d = 1.
  std::vector<Rational> symmetrizer;

  int rank() const { return datum.rank; }
  std::optional<std::size_t> find_positive(const std::vector<int>& coeffs) const;
  /// <beta, alpha_i^vee> for all i: the weight of beta in fundamental-weight coordinates.
  std::vector<int> dynkin_labels(const std::vector<int>& coeffs) const;
  Rational inner(const std::vector<int>& a, const std::vector<int>& b) const;
  /// Coefficients of the coroot of positive root p over the simple coroots.
  std::vector<int> coroot_coefficients(std::size_t p) const;
  int height(std::size_t p) const;

 private:
  std::map<std::vector<int>, std::size_t> index_;
  friend RootSystem build_root_system(const CartanDatum&);
};

RootSystem build_root_system(const CartanDatum& datum);

/// Element of the dual space, in the dual basis.
struct DualVector {
  std::vector<Rational> coefficients;

  static DualVector zero(std::size_t dim) { return DualVector{std::vector<Rational>(dim)}; }
  bool is_zero() const;
  DualVector operator-() const;
  DualVector scaled(const Rational& c) const;
};

/// Immutable multiplication table of a finite-dimensional Lie algebra.
class LieAlgebra {
 public:
  /// Raw constructor for toy algebras in tests and for deserialization. `brackets`
  /// holds (i, j, combination) for i < j; the rest follows by antisymmetry.
  LieAlgebra(std::string label, std::vector<std::string> basis_labels,
             const std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Combination>>& brackets,
             std::optional<RootSystem> roots = std::nullopt);

  const std::string& label() const { return label_; }
  std::size_t dim() const { return dim_; }
  int rank() const { return roots_ ? roots_->rank() : 0; }
  const std::vector<std::string>& basis_labels() const { return labels_; }
  const std::optional<RootSystem>& roots() const { return roots_; }

  const Combination& bracket(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  Combination bracket(const Combination& x, const Combination& y) const;

  /// trace(ad x . ad y) on basis pairs.
  const std::vector<std::vector<Rational>>& killing_form() const { return killing_; }
  /// Rows of the inverse Killing matrix; empty optional when the form is degenerate.
  const std::optional<std::vector<Combination>>& killing_inverse() const { return killing_inverse_; }

  /// Weight (Cartan eigenvalues on h_1..h_r) of each basis element; empty without root data.
  const std::vector<std::vector<int>>& basis_weights() const { return weights_; }

  /// (ad*_x lam)(y) = -lam([x, y]).
  DualVector coadjoint(const Combination& x, const DualVector& lam) const;
  Rational pair(const DualVector& lam, const Combination& x) const;

  /// Exhaustive check over basis triples i < j < k; returns the first failing triple.
  std::optional<std::array<std::size_t, 3>> find_jacobi_violation() const;
  bool is_antisymmetric() const;

  bool integral() const { return integral_; }

 private:
  std::string label_;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<Combination> table_;
  std::optional<RootSystem> roots_;
  std::vector<std::vector<int>> weights_;
  std::vector<std::vector<Rational>> killing_;
  std::optional<std::vector<Combination>> killing_inverse_;
  bool integral_ = true;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> int_table_;
};

/// Chevalley basis h_1..h_r, e_alpha (root order), f_alpha (same order).
/// Signs: N_{alpha,beta} = +(p+1) on extraspecial pairs. Throws IdentityFailure if
/// the resulting table violates the Jacobi identity.
LieAlgebra build_chevalley_basis(const RootSystem& roots);

LieAlgebra make_algebra(std::string_view label);

/// Killing form from root data alone: K(h_i,h_j) = sum over roots of
/// <a,a_i^vee><a,a_j^vee>, K(e_a, f_a) = K(h_a, h_a)/2.
std::vector<std::vector<Rational>> killing_from_roots(const LieAlgebra& algebra);

/// Versioned JSON document: basis labels, bracket records (i, j, k, num, den), Killing entries.
nlohmann::ordered_json algebra_to_json(const LieAlgebra& algebra);
LieAlgebra algebra_from_json(const nlohmann::json& doc);

inline constexpr int kAlgebraFormatVersion = 1;

}  // namespace spencer
