#include "sym_algebra.hpp"

#include "errors.hpp"

#include <algorithm>
#include <limits>

namespace spencer {

SymElement SymElement::basis(std::size_t dim, Monomial m) {
  std::sort(m.begin(), m.end());
  for (auto i : m)
    if (i >= dim) throw UsageError("monomial index " + std::to_string(i) + " out of range");
  SymElement s{dim, static_cast<int>(m.size()), {}};
  s.terms.emplace(std::move(m), Rational(1));
  return s;
}

SymElement SymElement::from_combination(std::size_t dim, const Combination& c) {
  SymElement s = zero(dim, 1);
  for (const auto& [i, v] : c) {
    if (i >= dim) throw UsageError("basis index " + std::to_string(i) + " out of range");
    s.add(Monomial{static_cast<std::uint16_t>(i)}, v);
  }
  return s;
}

void SymElement::add(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  if (static_cast<int>(m.size()) != degree)
    throw UsageError("monomial of size " + std::to_string(m.size()) + " added to degree " +
                     std::to_string(degree) + " element");
  auto [it, inserted] = terms.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

SymElement& SymElement::operator+=(const SymElement& other) {
  if (other.ambient_dim != ambient_dim || other.degree != degree)
    throw UsageError("adding symmetric elements of different algebras or degrees");
  for (const auto& [m, c] : other.terms) add(m, c);
  return *this;
}

SymElement& SymElement::operator-=(const SymElement& other) {
  if (other.ambient_dim != ambient_dim || other.degree != degree)
    throw UsageError("subtracting symmetric elements of different algebras or degrees");
  for (const auto& [m, c] : other.terms) add(m, -c);
  return *this;
}

SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
SymElement operator-(SymElement a, const SymElement& b) { return a -= b; }

SymElement SymElement::scaled(const Rational& c) const {
  SymElement out = zero(ambient_dim, degree);
  if (c == 0) return out;
  out.terms = terms;
  for (auto& [m, v] : out.terms) v *= c;
  return out;
}

Combination SymElement::to_combination() const {
  if (degree != 1) throw UsageError("expected a degree-1 element, got degree " + std::to_string(degree));
  Combination c;
  for (const auto& [m, v] : terms) c.emplace_back(m[0], v);
  return c;
}

std::uint64_t sym_dim(std::uint64_t n, std::uint64_t k) {
  // C(n+k-1, k) = prod_{i=1..k} (n-1+i)/i, exact at every step
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (n == 0) return k == 0 ? 1 : 0;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - 1 + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
  return out;
}

SymElement sym_product(const SymElement& a, const SymElement& b) {
  if (a.ambient_dim != b.ambient_dim) throw UsageError("symmetric product of elements over different algebras");
  SymElement out = SymElement::zero(a.ambient_dim, a.degree + b.degree);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) out.add(merge(ma, mb), ca * cb);
  return out;
}

std::vector<Monomial> enumerate_basis(std::size_t n, int k, std::uint64_t cap) {
  if (k < 0) throw UsageError("negative symmetric degree");
  const std::uint64_t count = sym_dim(n, static_cast<std::uint64_t>(k));
  if (count > cap) throw ResourceCapError("Sym^" + std::to_string(k) + " basis", count, cap);
  std::vector<Monomial> out;
  out.reserve(count);
  if (n == 0) {
    if (k == 0) out.emplace_back();
    return out;
  }
  Monomial m(k, 0);
  while (true) {
    out.push_back(m);
    int pos = k - 1;
    while (pos >= 0 && m[pos] == n - 1) --pos;
    if (pos < 0) break;
    const auto v = static_cast<std::uint16_t>(m[pos] + 1);
    for (int j = pos; j < k; ++j) m[j] = v;
  }
  return out;
}

MonomialIndexer::MonomialIndexer(std::size_t n, int k) : n_(n), k_(k), size_(sym_dim(n, k)) {
  table_.assign(k + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int r = 0; r <= k; ++r)
    for (std::size_t m = 0; m <= n; ++m) table_[r][m] = sym_dim(m, r);
  prefix_.assign(k + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int r = 0; r <= k; ++r)
    for (std::size_t x = 0; x < n; ++x) prefix_[r][x + 1] = prefix_[r][x] + multichoose(n - x, r);
}

std::uint64_t MonomialIndexer::rank(std::span<const std::uint16_t> m) const {
  std::uint64_t index = 0;
  std::size_t prev = 0;
  for (int j = 0; j < k_; ++j) {
    const int rest = k_ - j - 1;
    index += prefix_[rest][m[j]] - prefix_[rest][prev];
    prev = m[j];
  }
  return index;
}

Monomial MonomialIndexer::unrank(std::uint64_t index) const {
  if (index >= size_) throw UsageError("monomial index out of range");
  Monomial m(k_);
  std::size_t t = 0;
  for (int j = 0; j < k_; ++j) {
    const int rest = k_ - j - 1;
    while (index >= multichoose(n_ - t, rest)) {
      index -= multichoose(n_ - t, rest);
      ++t;
    }
    m[j] = static_cast<std::uint16_t>(t);
  }
  return m;
}

std::vector<std::pair<std::uint64_t, Rational>> to_coordinates(const SymElement& s, const MonomialIndexer& idx) {
  if (s.ambient_dim != idx.ambient_dim() || s.degree != idx.degree())
    throw UsageError("element does not live in this symmetric power");
  std::vector<std::pair<std::uint64_t, Rational>> out;
  out.reserve(s.terms.size());
  for (const auto& [m, c] : s.terms) out.emplace_back(idx.rank(m), c);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SymElement from_coordinates(const std::vector<std::pair<std::uint64_t, Rational>>& coords, const MonomialIndexer& idx) {
  SymElement s = SymElement::zero(idx.ambient_dim(), idx.degree());
  for (const auto& [i, c] : coords) s.add(idx.unrank(i), c);
  return s;
}

SymElement bracket(const LieAlgebra& algebra, const SymElement& x, const SymElement& y) {
  if (x.ambient_dim != algebra.dim() || y.ambient_dim != algebra.dim())
    throw UsageError("bracket arguments do not belong to algebra " + algebra.label());
  return SymElement::from_combination(algebra.dim(), algebra.bracket(x.to_combination(), y.to_combination()));
}

DualVector coadjoint(const LieAlgebra& algebra, const SymElement& x, const DualVector& lam) {
  if (x.ambient_dim != algebra.dim()) throw UsageError("element does not belong to algebra " + algebra.label());
  return algebra.coadjoint(x.to_combination(), lam);
}

}  // namespace spencer
