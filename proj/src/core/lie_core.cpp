#include "lie_core.hpp"

#include "errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace spencer {

namespace {

void add_term(std::map<std::uint32_t, Rational>& acc, std::uint32_t index, const Rational& value) {
  if (value == 0) return;
  auto [it, inserted] = acc.try_emplace(index, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) acc.erase(it);
  }
}

Combination to_combination(const std::map<std::uint32_t, Rational>& acc) {
  Combination out;
  out.reserve(acc.size());
  for (const auto& [i, v] : acc)
    if (v != 0) out.emplace_back(i, v);
  return out;
}

Combination negated(const Combination& c) {
  Combination out = c;
  for (auto& [i, v] : out) v = -v;
  return out;
}

/// Exact inverse of a symmetric matrix, block by block over the connected
/// components of its sparsity pattern. Returns nullopt when singular.
std::optional<std::vector<Combination>> invert_by_blocks(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j] != 0) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) blocks[find(i)].push_back(i);

  std::vector<std::map<std::uint32_t, Rational>> rows(n);
  for (const auto& [root, idx] : blocks) {
    const std::size_t b = idx.size();
    std::vector<std::vector<Rational>> a(b, std::vector<Rational>(2 * b));
    for (std::size_t r = 0; r < b; ++r) {
      for (std::size_t c = 0; c < b; ++c) a[r][c] = m[idx[r]][idx[c]];
      a[r][b + r] = 1;
    }
    for (std::size_t col = 0; col < b; ++col) {
      std::size_t piv = col;
      while (piv < b && a[piv][col] == 0) ++piv;
      if (piv == b) return std::nullopt;
      std::swap(a[piv], a[col]);
      Rational inv = 1 / a[col][col];
      for (auto& x : a[col]) x *= inv;
      for (std::size_t r = 0; r < b; ++r) {
        if (r == col || a[r][col] == 0) continue;
        Rational f = a[r][col];
        for (std::size_t c = 0; c < 2 * b; ++c) a[r][c] -= f * a[col][c];
      }
    }
    for (std::size_t r = 0; r < b; ++r)
      for (std::size_t c = 0; c < b; ++c)
        if (a[r][b + c] != 0) rows[idx[r]][static_cast<std::uint32_t>(idx[c])] = a[r][b + c];
  }
  std::vector<Combination> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = to_combination(rows[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cartan data

CartanDatum standard_cartan(char family, int rank) {
  auto bad = [&](const std::string& why) {
    return UsageError("unsupported algebra " + std::string(1, family) + std::to_string(rank) + ": " + why);
  };
  switch (family) {
    case 'A': if (rank < 1) throw bad("rank must be >= 1"); break;
    case 'B': if (rank < 2) throw bad("rank must be >= 2"); break;
    case 'C': if (rank < 3) throw bad("rank must be >= 3"); break;
    case 'D': if (rank < 4) throw bad("rank must be >= 4"); break;
    case 'E': if (rank < 6 || rank > 8) throw bad("rank must be 6, 7 or 8"); break;
    case 'F': if (rank != 4) throw bad("rank must be 4"); break;
    case 'G': if (rank != 2) throw bad("rank must be 2"); break;
    default: throw bad("family must be one of A B C D E F G");
  }
  CartanDatum d{family, rank, std::vector<std::vector<int>>(rank, std::vector<int>(rank, 0))};
  auto& a = d.cartan_matrix;
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  for (int i = 0; i < rank; ++i) a[i][i] = 2;
  const int n = rank;
  switch (family) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':  // alpha_n short
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 1][n - 2] = -2;
      break;
    case 'C':  // alpha_n long
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 2][n - 1] = -2;
      break;
    case 'D':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':  // 1-3-4-5-6(-7(-8)), 2 attached to 4
      link(0, 2);
      link(1, 3);
      for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'F':  // 1-2=>3-4, alpha_1, alpha_2 long
      link(0, 1);
      link(2, 3);
      a[1][2] = -1;
      a[2][1] = -2;
      break;
    case 'G':  // alpha_1 short, alpha_2 long
      a[0][1] = -3;
      a[1][0] = -1;
      break;
  }
  return d;
}

CartanDatum parse_algebra_label(std::string_view label) {
  if (label.size() < 2) throw UsageError("invalid algebra label '" + std::string(label) + "'");
  char family = label.front();
  if (family >= 'a' && family <= 'z') family = static_cast<char>(family - 'a' + 'A');
  int rank = 0;
  for (char c : label.substr(1)) {
    if (c < '0' || c > '9' || rank > 1000) throw UsageError("invalid algebra label '" + std::string(label) + "'");
    rank = rank * 10 + (c - '0');
  }
  return standard_cartan(family, rank);
}

void validate_cartan(const CartanDatum& datum) {
  const auto& a = datum.cartan_matrix;
  const int n = datum.rank;
  if (n < 1 || static_cast<int>(a.size()) != n)
    throw UsageError("Cartan matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a[i].size()) != n)
      throw UsageError("Cartan matrix row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < n; ++j) {
      auto entry = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(a[i][j]);
      if (i == j && a[i][j] != 2) throw UsageError("Cartan " + entry + ": diagonal must be 2");
      if (i != j && a[i][j] > 0) throw UsageError("Cartan " + entry + ": off-diagonal must be nonpositive");
      if (i != j && (a[i][j] == 0) != (a[j][i] == 0))
        throw UsageError("Cartan " + entry + ": zero pattern must be symmetric");
    }
  }
  CartanDatum expected = standard_cartan(datum.family, datum.rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a[i][j] != expected.cartan_matrix[i][j])
        throw UsageError("Cartan entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                         std::to_string(a[i][j]) + " does not match the standard " + datum.label() +
                         " table (expected " + std::to_string(expected.cartan_matrix[i][j]) + ")");
}

// ---------------------------------------------------------------------------
// Root system

std::optional<std::size_t> RootSystem::find_positive(const std::vector<int>& coeffs) const {
  auto it = index_.find(coeffs);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> RootSystem::dynkin_labels(const std::vector<int>& coeffs) const {
  const auto& a = datum.cartan_matrix;
  std::vector<int> out(rank(), 0);
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) out[i] += a[i][j] * coeffs[j];
  return out;
}

Rational RootSystem::inner(const std::vector<int>& x, const std::vector<int>& y) const {
  // (alpha_i, alpha_j) = d_i A[i][j]
  Rational s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < rank(); ++j)
      if (y[j] != 0) s += symmetrizer[i] * datum.cartan_matrix[i][j] * x[i] * y[j];
  }
  return s;
}

std::vector<int> RootSystem::coroot_coefficients(std::size_t p) const {
  const auto& root = positive_roots.at(p);
  Rational half_norm = inner(root, root) / 2;
  std::vector<int> out(rank());
  for (int i = 0; i < rank(); ++i) {
    Rational c = root[i] * symmetrizer[i] / half_norm;
    if (c.get_den() != 1) throw IdentityFailure("non-integral coroot coefficient");
    out[i] = static_cast<int>(c.get_num().get_si());
  }
  return out;
}

int RootSystem::height(std::size_t p) const {
  const auto& r = positive_roots.at(p);
  return std::accumulate(r.begin(), r.end(), 0);
}

RootSystem build_root_system(const CartanDatum& datum) {
  validate_cartan(datum);
  const int n = datum.rank;
  RootSystem rs;
  rs.datum = datum;
  const auto& a = datum.cartan_matrix;

  // symmetrizer: d_i A[i][j] = d_j A[j][i], propagated along the Dynkin diagram
  rs.symmetrizer.assign(n, Rational(0));
  rs.symmetrizer[0] = 1;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (j == i || a[i][j] == 0 || rs.symmetrizer[j] != 0) continue;
      rs.symmetrizer[j] = rs.symmetrizer[i] * a[i][j] / a[j][i];
      stack.push_back(j);
    }
  }
  Rational largest = *std::max_element(rs.symmetrizer.begin(), rs.symmetrizer.end());
  for (auto& d : rs.symmetrizer) d /= largest;

  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    rs.simple_roots.push_back(e);
  }

  std::set<std::vector<int>> known;
  std::vector<std::vector<int>> level(rs.simple_roots.rbegin(), rs.simple_roots.rend());
  std::sort(level.begin(), level.end(), std::greater<>());
  while (!level.empty()) {
    for (const auto& r : level) {
      rs.index_[r] = rs.positive_roots.size();
      rs.positive_roots.push_back(r);
      known.insert(r);
    }
    std::set<std::vector<int>, std::greater<>> next;
    for (const auto& beta : level) {
      for (int i = 0; i < n; ++i) {
        // alpha_i-string through beta: beta - q alpha_i, ..., beta + p alpha_i
        int q = 0;
        std::vector<int> down = beta;
        while (true) {
          down[i] -= 1;
          if (!known.count(down)) break;
          ++q;
        }
        int pairing = 0;
        for (int j = 0; j < n; ++j) pairing += a[i][j] * beta[j];
        if (q - pairing > 0) {
          auto up = beta;
          up[i] += 1;
          next.insert(up);
        }
      }
    }
    level.assign(next.begin(), next.end());
  }
  rs.root_count = 2 * rs.positive_roots.size();
  return rs;
}

// ---------------------------------------------------------------------------
// Dual vectors

bool DualVector::is_zero() const {
  return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& q) { return q == 0; });
}

DualVector DualVector::operator-() const { return scaled(Rational(-1)); }

DualVector DualVector::scaled(const Rational& c) const {
  DualVector out = *this;
  for (auto& x : out.coefficients) x *= c;
  return out;
}

// ---------------------------------------------------------------------------
// Lie algebra table

LieAlgebra::LieAlgebra(std::string label, std::vector<std::string> basis_labels,
                       const std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Combination>>& brackets,
                       std::optional<RootSystem> roots)
    : label_(std::move(label)), dim_(basis_labels.size()), labels_(std::move(basis_labels)),
      table_(dim_ * dim_), roots_(std::move(roots)) {
  for (const auto& [ij, comb] : brackets) {
    auto [i, j] = ij;
    if (i >= dim_ || j >= dim_ || i == j)
      throw UsageError("bracket record (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    for (const auto& [k, v] : comb)
      if (k >= dim_) throw UsageError("bracket result index " + std::to_string(k) + " out of range");
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [k, v] : comb) add_term(acc, k, v);
    table_[i * dim_ + j] = to_combination(acc);
    table_[j * dim_ + i] = negated(table_[i * dim_ + j]);
  }

  int_table_.resize(dim_ * dim_);
  for (std::size_t t = 0; t < table_.size(); ++t)
    for (const auto& [k, v] : table_[t]) {
      if (v.get_den() != 1 || !v.get_num().fits_slong_p()) {
        integral_ = false;
        break;
      }
      int_table_[t].emplace_back(k, v.get_num().get_si());
    }
  if (!integral_) int_table_.clear();

  if (roots_) {
    const auto& rs = *roots_;
    const std::size_t r = rs.rank(), np = rs.positive_roots.size();
    if (dim_ != r + 2 * np) throw UsageError("basis size does not match root data");
    weights_.assign(dim_, std::vector<int>(r, 0));
    for (std::size_t p = 0; p < np; ++p) {
      auto w = rs.dynkin_labels(rs.positive_roots[p]);
      weights_[r + p] = w;
      for (auto& x : w) x = -x;
      weights_[r + np + p] = w;
    }
  }

  // K_ij = sum_k sum_m c^m_{jk} c^k_{im}
  killing_.assign(dim_, std::vector<Rational>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < dim_; ++k)
        for (const auto& [m, c1] : bracket(j, k))
          for (const auto& [kk, c2] : bracket(i, m))
            if (kk == k) s += c1 * c2;
      killing_[i][j] = killing_[j][i] = s;
    }
  killing_inverse_ = invert_by_blocks(killing_);
}

Combination LieAlgebra::bracket(const Combination& x, const Combination& y) const {
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (const auto& [k, c] : bracket(i, j)) add_term(acc, k, a * b * c);
  return to_combination(acc);
}

Rational LieAlgebra::pair(const DualVector& lam, const Combination& x) const {
  Rational s = 0;
  for (const auto& [i, v] : x) s += lam.coefficients.at(i) * v;
  return s;
}

DualVector LieAlgebra::coadjoint(const Combination& x, const DualVector& lam) const {
  if (lam.coefficients.size() != dim_) throw UsageError("dual vector does not belong to this algebra");
  DualVector out = DualVector::zero(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    Rational s = 0;
    for (const auto& [i, xi] : x) {
      if (i >= dim_) throw UsageError("element does not belong to this algebra");
      for (const auto& [m, c] : bracket(i, j)) s += xi * c * lam.coefficients[m];
    }
    out.coefficients[j] = -s;
  }
  return out;
}

bool LieAlgebra::is_antisymmetric() const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!bracket(i, i).empty()) return false;
    for (std::size_t j = i + 1; j < dim_; ++j)
      if (bracket(i, j) != negated(bracket(j, i))) return false;
  }
  return true;
}

std::optional<std::array<std::size_t, 3>> LieAlgebra::find_jacobi_violation() const {
  const std::size_t n = dim_;
  if (integral_) {
    std::vector<std::int64_t> acc(n, 0);
    std::vector<std::uint32_t> touched;
    auto add_nested = [&](std::size_t x, std::size_t y, std::size_t z) {
      // [x, [y, z]]
      for (const auto& [m, c1] : int_table_[y * n + z])
        for (const auto& [k, c2] : int_table_[x * n + m]) {
          if (acc[k] == 0) touched.push_back(k);
          acc[k] += c1 * c2;
        }
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          touched.clear();
          add_nested(i, j, k);
          add_nested(j, k, i);
          add_nested(k, i, j);
          bool bad = false;
          for (auto t : touched) {
            if (acc[t] != 0) bad = true;
            acc[t] = 0;
          }
          if (bad) return std::array<std::size_t, 3>{i, j, k};
        }
    return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        std::map<std::uint32_t, Rational> acc;
        auto add_nested = [&](std::size_t x, std::size_t y, std::size_t z) {
          for (const auto& [m, c1] : bracket(y, z))
            for (const auto& [t, c2] : bracket(x, m)) add_term(acc, t, c1 * c2);
        };
        add_nested(i, j, k);
        add_nested(j, k, i);
        add_nested(k, i, j);
        if (!acc.empty()) return std::array<std::size_t, 3>{i, j, k};
      }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Chevalley basis

namespace {

/// Structure constants N_{r,s} of [e_r, e_s] = N_{r,s} e_{r+s} over all roots.
/// Root ids: positive root p -> p, its negative -> P + p.
class StructureConstants {
 public:
  explicit StructureConstants(const RootSystem& rs)
      : rs_(rs), np_(rs.positive_roots.size()), memo_(4 * np_ * np_, kUnknown) {
    for (std::size_t p = 0; p < np_; ++p) norms_.push_back(rs.inner(rs.positive_roots[p], rs.positive_roots[p]));
    // extraspecial pairs: for xi non-simple, (alpha, beta) with alpha minimal in root order
    extraspecial_.assign(np_, {np_, np_});
    for (std::size_t xi = 0; xi < np_; ++xi)
      for (std::size_t alpha = 0; alpha < xi && extraspecial_[xi].first == np_; ++alpha) {
        auto rest = diff(rs.positive_roots[xi], rs.positive_roots[alpha]);
        auto beta = rs.find_positive(rest);
        if (beta && alpha < *beta) extraspecial_[xi] = {alpha, *beta};
      }
  }

  int operator()(std::size_t r, std::size_t s) {
    int& slot = memo_[r * 2 * np_ + s];
    if (slot == kUnknown) slot = compute(r, s);
    return slot;
  }

  std::optional<std::size_t> sum(std::size_t r, std::size_t s) const { return find(add(vec(r), vec(s))); }

 private:
  static constexpr int kUnknown = 1 << 30;

  static std::vector<int> add(std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  }
  static std::vector<int> diff(std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  }
  bool positive(std::size_t id) const { return id < np_; }
  std::size_t neg(std::size_t id) const { return id < np_ ? id + np_ : id - np_; }
  std::vector<int> vec(std::size_t id) const {
    if (id < np_) return rs_.positive_roots[id];
    auto v = rs_.positive_roots[id - np_];
    for (auto& x : v) x = -x;
    return v;
  }
  std::optional<std::size_t> find(const std::vector<int>& v) const {
    if (auto p = rs_.find_positive(v)) return *p;
    auto m = v;
    for (auto& x : m) x = -x;
    if (auto p = rs_.find_positive(m)) return *p + np_;
    return std::nullopt;
  }
  const Rational& norm(std::size_t id) const { return norms_[id % np_]; }

  int compute(std::size_t r, std::size_t s) {
    auto t_opt = sum(r, s);
    if (!t_opt) return 0;
    const std::size_t rs_sum = *t_opt;
    if (positive(r) && positive(s)) {
      auto [alpha, beta] = extraspecial_[rs_sum];
      if (r == alpha && s == beta) return string_length(alpha, beta) + 1;
      if (r == beta && s == alpha) return -(string_length(alpha, beta) + 1);
      const std::size_t na = neg(alpha), nb = neg(beta);
      Rational total = 0;
      if (auto d = sum(s, na)) total += Rational((*this)(s, na) * (*this)(r, nb)) / norm(*d);
      if (auto d = sum(r, na)) total += Rational((*this)(na, r) * (*this)(s, nb)) / norm(*d);
      Rational value = norm(rs_sum) * total / (*this)(alpha, beta);
      return checked_int(value, r, s);
    }
    if (!positive(r) && !positive(s)) return -(*this)(neg(r), neg(s));
    // r + s + t = 0: N_{r,s}/(t,t) = N_{s,t}/(r,r) = N_{t,r}/(s,s)
    const std::size_t t = neg(rs_sum);
    if (positive(s) == positive(t)) return checked_int(norm(t) / norm(r) * (*this)(s, t), r, s);
    return checked_int(norm(t) / norm(s) * (*this)(t, r), r, s);
  }

  /// Largest p with beta - p alpha a root.
  int string_length(std::size_t alpha, std::size_t beta) const {
    int p = 0;
    auto v = vec(beta);
    const auto a = vec(alpha);
    while (true) {
      v = diff(v, a);
      if (!find(v)) return p;
      ++p;
    }
  }

  static int checked_int(const Rational& v, std::size_t r, std::size_t s) {
    if (v.get_den() != 1)
      throw IdentityFailure("non-integral structure constant for root pair (" + std::to_string(r) + "," +
                            std::to_string(s) + ")");
    return static_cast<int>(v.get_num().get_si());
  }

  const RootSystem& rs_;
  std::size_t np_;
  std::vector<int> memo_;
  std::vector<Rational> norms_;
  std::vector<std::pair<std::size_t, std::size_t>> extraspecial_;
};

std::string root_label(const std::vector<int>& coeffs) {
  std::string s = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? "," : "") + std::to_string(coeffs[i]);
  return s + "]";
}

}  // namespace

LieAlgebra build_chevalley_basis(const RootSystem& rs) {
  const std::size_t r = rs.rank(), np = rs.positive_roots.size();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < r; ++i) labels.push_back("h" + std::to_string(i + 1));
  for (const auto& root : rs.positive_roots) labels.push_back("e" + root_label(root));
  for (const auto& root : rs.positive_roots) labels.push_back("f" + root_label(root));

  StructureConstants N(rs);
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Combination>> brackets;
  auto u32 = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      int c = rs.dynkin_labels(rs.positive_roots[p])[i];
      if (c == 0) continue;
      brackets.push_back({{u32(i), u32(r + p)}, {{u32(r + p), Rational(c)}}});
      brackets.push_back({{u32(i), u32(r + np + p)}, {{u32(r + np + p), Rational(-c)}}});
    }
  // root ids coincide with basis offsets: basis index = r + id
  for (std::size_t a = 0; a < 2 * np; ++a)
    for (std::size_t b = a + 1; b < 2 * np; ++b) {
      if (b == a + np) {
        auto cor = rs.coroot_coefficients(a);
        Combination h;
        for (std::size_t i = 0; i < r; ++i)
          if (cor[i] != 0) h.emplace_back(u32(i), Rational(cor[i]));
        brackets.push_back({{u32(r + a), u32(r + b)}, h});
        continue;
      }
      auto s = N.sum(a, b);
      if (!s) continue;
      int c = N(a, b);
      if (c == 0) throw IdentityFailure("vanishing structure constant on a root sum");
      brackets.push_back({{u32(r + a), u32(r + b)}, {{u32(r + *s), Rational(c)}}});
    }

  LieAlgebra alg(rs.datum.label(), std::move(labels), brackets, rs);
  if (auto bad = alg.find_jacobi_violation()) {
    const auto& l = alg.basis_labels();
    throw IdentityFailure("Jacobi identity fails on (" + l[(*bad)[0]] + ", " + l[(*bad)[1]] + ", " +
                          l[(*bad)[2]] + ")");
  }
  return alg;
}

LieAlgebra make_algebra(std::string_view label) {
  return build_chevalley_basis(build_root_system(parse_algebra_label(label)));
}

std::vector<std::vector<Rational>> killing_from_roots(const LieAlgebra& algebra) {
  if (!algebra.roots()) throw UsageError("algebra carries no root data");
  const auto& rs = *algebra.roots();
  const std::size_t r = rs.rank(), np = rs.positive_roots.size(), n = algebra.dim();
  std::vector<std::vector<Rational>> k(n, std::vector<Rational>(n));
  std::vector<std::vector<int>> labels;
  for (const auto& root : rs.positive_roots) labels.push_back(rs.dynkin_labels(root));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      long s = 0;
      for (const auto& w : labels) s += 2L * w[i] * w[j];
      k[i][j] = s;
    }
  for (std::size_t p = 0; p < np; ++p) {
    auto c = rs.coroot_coefficients(p);
    Rational s = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) s += k[i][j] * c[i] * c[j];
    k[r + p][r + np + p] = k[r + np + p][r + p] = s / 2;
  }
  return k;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json algebra_to_json(const LieAlgebra& algebra) {
  nlohmann::ordered_json doc;
  doc["format"] = "spencer-algebra";
  doc["version"] = kAlgebraFormatVersion;
  doc["label"] = algebra.label();
  if (algebra.roots()) {
    const auto& d = algebra.roots()->datum;
    doc["family"] = std::string(1, d.family);
    doc["rank"] = d.rank;
    doc["cartan_matrix"] = d.cartan_matrix;
  }
  doc["dim"] = algebra.dim();
  doc["basis_labels"] = algebra.basis_labels();
  auto brackets = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < algebra.dim(); ++i)
    for (std::size_t j = i + 1; j < algebra.dim(); ++j)
      for (const auto& [k, v] : algebra.bracket(i, j))
        brackets.push_back({i, j, k, v.get_num().get_si(), v.get_den().get_si()});
  doc["brackets"] = std::move(brackets);
  auto killing = nlohmann::ordered_json::array();
  const auto& kf = algebra.killing_form();
  for (std::size_t i = 0; i < algebra.dim(); ++i)
    for (std::size_t j = 0; j < algebra.dim(); ++j)
      if (kf[i][j] != 0) killing.push_back({i, j, kf[i][j].get_num().get_si(), kf[i][j].get_den().get_si()});
  doc["killing"] = std::move(killing);
  return doc;
}

LieAlgebra algebra_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "spencer-algebra") throw UsageError("not a spencer-algebra document");
    if (doc.at("version").get<int>() != kAlgebraFormatVersion)
      throw UsageError("unsupported algebra format version " + doc.at("version").dump());
    auto labels = doc.at("basis_labels").get<std::vector<std::string>>();
    std::optional<RootSystem> roots;
    if (doc.contains("family")) {
      CartanDatum d{doc.at("family").get<std::string>().at(0), doc.at("rank").get<int>(),
                    doc.at("cartan_matrix").get<std::vector<std::vector<int>>>()};
      roots = build_root_system(d);
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<std::uint32_t, Rational>> acc;
    for (const auto& rec : doc.at("brackets")) {
      auto i = rec.at(0).get<std::uint32_t>(), j = rec.at(1).get<std::uint32_t>(), k = rec.at(2).get<std::uint32_t>();
      if (i >= j) throw UsageError("bracket records must have i < j");
      long den = rec.at(4).get<long>();
      if (den == 0) throw UsageError("zero denominator in bracket record");
      Rational v(rec.at(3).get<long>(), den);
      v.canonicalize();
      add_term(acc[{i, j}], k, v);
    }
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, Combination>> brackets;
    for (const auto& [ij, m] : acc) brackets.push_back({ij, to_combination(m)});
    LieAlgebra alg(doc.at("label").get<std::string>(), std::move(labels), brackets, std::move(roots));
    if (auto bad = alg.find_jacobi_violation())
      throw IdentityFailure("loaded table violates the Jacobi identity at basis triple (" +
                            std::to_string((*bad)[0]) + "," + std::to_string((*bad)[1]) + "," +
                            std::to_string((*bad)[2]) + ")");
    return alg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed algebra document: ") + e.what());
  }
}

}  // namespace spencer
