#pragma once

#include "lie_core.hpp"
#include "rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace spencer {

/// Sorted multiset of basis indices.
using Monomial = std::vector<std::uint16_t>;

inline constexpr std::uint64_t kDefaultDimCap = 10'000'000;

/// Element of Sym^k over an ambient space of dimension `ambient_dim`, in the
/// monomial basis (coefficient-1 monomials, no multinomial factors).
struct SymElement {
  std::size_t ambient_dim = 0;
  int degree = 0;
  std::map<Monomial, Rational> terms;

  static SymElement zero(std::size_t dim, int degree) { return SymElement{dim, degree, {}}; }
  static SymElement one(std::size_t dim) { return SymElement{dim, 0, {{Monomial{}, Rational(1)}}}; }
  static SymElement basis(std::size_t dim, Monomial m);
  static SymElement from_combination(std::size_t dim, const Combination& c);

  bool is_zero() const { return terms.empty(); }
  void add(const Monomial& m, const Rational& c);
  SymElement& operator+=(const SymElement& other);
  SymElement& operator-=(const SymElement& other);
  SymElement scaled(const Rational& c) const;
  /// Degree-1 element as a plain combination.
  Combination to_combination() const;

  friend bool operator==(const SymElement&, const SymElement&) = default;
};

SymElement operator+(SymElement a, const SymElement& b);
SymElement operator-(SymElement a, const SymElement& b);

/// C(n + k - 1, k), saturating at UINT64_MAX.
std::uint64_t sym_dim(std::uint64_t n, std::uint64_t k);

SymElement sym_product(const SymElement& a, const SymElement& b);

/// Sorted multiset union.
Monomial merge(const Monomial& a, const Monomial& b);

/// Lexicographic order of sorted index lists. Throws ResourceCapError above `cap`.
std::vector<Monomial> enumerate_basis(std::size_t n, int k, std::uint64_t cap = kDefaultDimCap);

/// Position of a monomial in enumerate_basis order, in O(k).
class MonomialIndexer {
 public:
  MonomialIndexer(std::size_t n, int k);
  std::uint64_t size() const { return size_; }
  std::size_t ambient_dim() const { return n_; }
  int degree() const { return k_; }
  std::uint64_t rank(std::span<const std::uint16_t> sorted) const;
  Monomial unrank(std::uint64_t index) const;

 private:
  std::uint64_t multichoose(std::size_t m, int r) const { return table_[r][m]; }
  std::size_t n_;
  int k_;
  std::uint64_t size_;
  std::vector<std::vector<std::uint64_t>> table_;   // table_[r][m] = multichoose(m, r)
  std::vector<std::vector<std::uint64_t>> prefix_;  // prefix_[r][x] = sum_{t<x} multichoose(n - t, r)
};

/// Coordinates in the enumerate_basis order.
std::vector<std::pair<std::uint64_t, Rational>> to_coordinates(const SymElement& s, const MonomialIndexer& idx);
SymElement from_coordinates(const std::vector<std::pair<std::uint64_t, Rational>>& coords, const MonomialIndexer& idx);

/// Bracket of two degree-1 elements.
SymElement bracket(const LieAlgebra& algebra, const SymElement& x, const SymElement& y);
DualVector coadjoint(const LieAlgebra& algebra, const SymElement& x, const DualVector& lam);

}  // namespace spencer
