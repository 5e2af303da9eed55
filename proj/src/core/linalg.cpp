#include "linalg.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <tuple>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace spencer {

namespace {

void accumulate(std::map<std::uint32_t, Rational>& acc, std::uint32_t i, const Rational& v) {
  if (v == 0) return;
  auto [it, inserted] = acc.try_emplace(i, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) acc.erase(it);
  }
}

SparseVector flatten(const std::map<std::uint32_t, Rational>& acc) {
  SparseVector out;
  out.reserve(acc.size());
  for (const auto& [i, v] : acc) out.emplace_back(i, v);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sparse matrix basics

std::uint64_t SparseMatrix::nnz() const {
  std::uint64_t n = 0;
  for (const auto& c : columns) n += c.size();
  return n;
}

Rational SparseMatrix::max_abs_entry() const {
  Rational best = 0;
  for (const auto& c : columns)
    for (const auto& [r, v] : c)
      if (abs_value(v) > best) best = abs_value(v);
  return best;
}

SparseVector SparseMatrix::apply(const SparseVector& x) const {
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [j, xj] : x) {
    if (j >= cols) throw UsageError("vector index out of range for matrix product");
    for (const auto& [i, a] : columns[j]) accumulate(acc, i, a * xj);
  }
  return flatten(acc);
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
  SparseMatrix out(rows, cols);
  if (c == 0) return out;
  out.columns = columns;
  for (auto& col : out.columns)
    for (auto& [r, v] : col) v *= c;
  return out;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw UsageError("matrix sum with mismatched shapes");
  SparseMatrix out(a.rows, a.cols);
  for (std::uint64_t j = 0; j < a.cols; ++j) {
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [i, v] : a.columns[j]) accumulate(acc, i, v);
    for (const auto& [i, v] : b.columns[j]) accumulate(acc, i, v);
    out.columns[j] = flatten(acc);
  }
  return out;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw UsageError("matrix product with mismatched inner dimension");
  SparseMatrix out(a.rows, b.cols);
  for (std::uint64_t j = 0; j < b.cols; ++j) out.columns[j] = a.apply(b.columns[j]);
  return out;
}

SparseMatrix from_columns(std::uint64_t rows, std::vector<SparseVector> columns) {
  SparseMatrix m;
  m.rows = rows;
  m.cols = columns.size();
  for (const auto& c : columns)
    for (const auto& [i, v] : c)
      if (i >= rows) throw UsageError("column entry outside the row range");
  m.columns = std::move(columns);
  return m;
}

SparseMatrix kron_identity(const SparseMatrix& a, std::uint64_t m) {
  SparseMatrix out(a.rows * m, a.cols * m);
  for (std::uint64_t j = 0; j < a.cols; ++j)
    for (std::uint64_t t = 0; t < m; ++t) {
      auto& col = out.columns[j * m + t];
      for (const auto& [i, v] : a.columns[j]) col.emplace_back(static_cast<std::uint32_t>(i * m + t), v);
    }
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m, const std::string& comment) {
  out << "%%MatrixMarket matrix coordinate rational general\n";
  out << "% entries are exact rationals written as num/den\n";
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string line; std::getline(lines, line);) out << "% " << line << "\n";
  }
  out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
  // row-major order for readability and diffability
  std::vector<std::tuple<std::uint32_t, std::uint64_t, const Rational*>> entries;
  entries.reserve(m.nnz());
  for (std::uint64_t j = 0; j < m.cols; ++j)
    for (const auto& [i, v] : m.columns[j]) entries.emplace_back(i, j, &v);
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
  });
  for (const auto& [i, j, v] : entries) out << i + 1 << " " << j + 1 << " " << to_token(*v) << "\n";
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket matrix coordinate", 0) != 0)
    throw UsageError("not a coordinate Matrix Market stream");
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz)) throw UsageError("malformed Matrix Market size line");
  std::vector<std::map<std::uint32_t, Rational>> acc(cols);
  for (std::uint64_t e = 0; e < nnz; ++e) {
    std::uint64_t i = 0, j = 0;
    std::string token;
    if (!(in >> i >> j >> token) || i == 0 || j == 0 || i > rows || j > cols)
      throw UsageError("malformed Matrix Market entry " + std::to_string(e + 1));
    accumulate(acc[j - 1], static_cast<std::uint32_t>(i - 1), parse_rational(token));
  }
  SparseMatrix m(rows, cols);
  for (std::uint64_t j = 0; j < cols; ++j) m.columns[j] = flatten(acc[j]);
  return m;
}

// ---------------------------------------------------------------------------
// Exact echelon

SparseVector ExactEchelon::reduce(const SparseVector& v) const {
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [i, x] : v) {
    if (i >= n_) throw UsageError("vector index out of range for subspace");
    accumulate(acc, i, x);
  }
  auto it = acc.begin();
  while (it != acc.end()) {
    auto piv = rows_.find(it->first);
    if (piv == rows_.end()) {
      ++it;
      continue;
    }
    const std::uint32_t col = it->first;
    const Rational f = it->second;
    for (const auto& [c, x] : piv->second) accumulate(acc, c, -f * x);
    it = acc.upper_bound(col);
  }
  return flatten(acc);
}

bool ExactEchelon::insert(const SparseVector& v) {
  SparseVector r = reduce(v);
  if (r.empty()) return false;
  const Rational inv = 1 / r.front().second;
  for (auto& [c, x] : r) x *= inv;
  const std::uint32_t lead = r.front().first;
  rows_.emplace(lead, std::move(r));
  return true;
}

void ExactEchelon::make_reduced() {
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [c, x] : it->second) acc.emplace(c, x);
    for (auto e = std::next(acc.begin()); e != acc.end();) {
      auto piv = rows_.find(e->first);
      if (piv == rows_.end()) {
        ++e;
        continue;
      }
      const std::uint32_t col = e->first;
      const Rational f = e->second;
      for (const auto& [c, x] : piv->second) accumulate(acc, c, -f * x);
      e = acc.upper_bound(col);
    }
    it->second = flatten(acc);
  }
}

std::size_t span_rank(const std::vector<SparseVector>& vectors, std::size_t n) {
  ExactEchelon e(n);
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

bool same_span(const std::vector<SparseVector>& a, const std::vector<SparseVector>& b, std::size_t n) {
  ExactEchelon ea(n), eb(n);
  for (const auto& v : a) ea.insert(v);
  for (const auto& v : b) eb.insert(v);
  if (ea.rank() != eb.rank()) return false;
  for (const auto& v : b)
    if (!ea.contains(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for all 64-bit n
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

/// One independent block of a sparse matrix, stored row-major with local column ids.
struct Block {
  std::vector<std::uint32_t> cols;  // global column ids, ascending
  std::vector<std::uint32_t> rows;  // global row ids, ascending
  std::vector<std::vector<std::pair<std::uint32_t, const Rational*>>> row_entries;
};

std::vector<Block> split_blocks(const SparseMatrix& m) {
  const std::size_t n = m.cols;
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::int64_t> first_col(m.rows, -1);
  for (std::uint32_t j = 0; j < n; ++j)
    for (const auto& [i, v] : m.columns[j]) {
      if (first_col[i] < 0) {
        first_col[i] = j;
      } else {
        auto a = find(j), b = find(static_cast<std::uint32_t>(first_col[i]));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  std::vector<std::int64_t> block_of_root(n, -1);
  std::vector<Block> blocks;
  std::vector<std::uint32_t> local(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    auto r = find(j);
    if (block_of_root[r] < 0) {
      block_of_root[r] = static_cast<std::int64_t>(blocks.size());
      blocks.emplace_back();
    }
    auto& b = blocks[block_of_root[r]];
    local[j] = static_cast<std::uint32_t>(b.cols.size());
    b.cols.push_back(j);
  }
  for (auto& b : blocks) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, const Rational*>> entries;
    for (auto j : b.cols)
      for (const auto& [i, v] : m.columns[j]) entries.emplace_back(i, local[j], &v);
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
    });
    for (const auto& [i, c, v] : entries) {
      if (b.rows.empty() || b.rows.back() != i) {
        b.rows.push_back(i);
        b.row_entries.emplace_back();
      }
      b.row_entries.back().emplace_back(c, v);
    }
  }
  return blocks;
}

struct ModularElimination {
  std::uint64_t rank = 0;
  std::vector<std::uint32_t> pivot_rows;  // local row ids
  std::vector<std::uint32_t> pivot_cols;  // leading column of each pivot
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> pivots;
};

inline std::uint64_t mulmod_small(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return p < (1ull << 32) ? a * b % p : mulmod(a, b, p);
}

/// Row-by-row echelon elimination over GF(p).
ModularElimination eliminate_mod(const Block& b, std::uint64_t p) {
  const std::size_t ncols = b.cols.size();
  ModularElimination out;
  std::vector<std::int32_t> pivot_of_col(ncols, -1);
  auto& pivots = out.pivots;
  std::vector<std::uint64_t> acc(ncols, 0);
  std::vector<char> queued(ncols, 0);
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> heap;
  for (std::size_t r = 0; r < b.row_entries.size() && out.rank < ncols; ++r) {
    for (const auto& [c, v] : b.row_entries[r]) {
      acc[c] = mod_p(*v, p);
      if (acc[c] && !queued[c]) {
        queued[c] = 1;
        heap.push(c);
      }
    }
    while (!heap.empty()) {
      const std::uint32_t c = heap.top();
      heap.pop();
      queued[c] = 0;
      if (acc[c] == 0) continue;
      if (pivot_of_col[c] >= 0) {
        const std::uint64_t f = p - acc[c];
        for (const auto& [cc, v] : pivots[pivot_of_col[c]]) {
          acc[cc] = (acc[cc] + mulmod_small(f, v, p)) % p;
          if (acc[cc] && !queued[cc]) {
            queued[cc] = 1;
            heap.push(cc);
          }
        }
        continue;
      }
      const std::uint64_t inv = invmod(acc[c], p);
      std::vector<std::pair<std::uint32_t, std::uint64_t>> row{{c, 1}};
      acc[c] = 0;
      while (!heap.empty()) {
        const std::uint32_t cc = heap.top();
        heap.pop();
        queued[cc] = 0;
        if (acc[cc]) row.emplace_back(cc, mulmod_small(acc[cc], inv, p));
        acc[cc] = 0;
      }
      pivot_of_col[c] = static_cast<std::int32_t>(pivots.size());
      pivots.push_back(std::move(row));
      out.pivot_rows.push_back(static_cast<std::uint32_t>(r));
      out.pivot_cols.push_back(c);
      ++out.rank;
    }
  }
  return out;
}

/// Reduced kernel modulo p: value[pi][fi] is the entry of the kernel vector for
/// free column fi at pivot column pi (both in ascending column order).
struct ModularKernel {
  std::vector<std::uint32_t> pivot_cols, free_cols;
  std::vector<std::vector<std::uint64_t>> value;
};

ModularKernel modular_kernel(const ModularElimination& e, std::size_t ncols, std::uint64_t p) {
  ModularKernel k;
  std::vector<std::int64_t> pivot_index(ncols, -1), free_index(ncols, -1);
  k.pivot_cols = e.pivot_cols;
  std::sort(k.pivot_cols.begin(), k.pivot_cols.end());
  for (std::size_t i = 0; i < k.pivot_cols.size(); ++i) pivot_index[k.pivot_cols[i]] = static_cast<std::int64_t>(i);
  for (std::uint32_t c = 0; c < ncols; ++c)
    if (pivot_index[c] < 0) {
      free_index[c] = static_cast<std::int64_t>(k.free_cols.size());
      k.free_cols.push_back(c);
    }
  const std::size_t nf = k.free_cols.size();
  std::vector<std::size_t> order(e.pivots.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return e.pivot_cols[x] > e.pivot_cols[y]; });
  // reduced rows restricted to free columns
  std::vector<std::vector<std::uint64_t>> reduced(k.pivot_cols.size());
  std::vector<std::uint64_t> buf(nf);
  for (auto idx : order) {
    std::fill(buf.begin(), buf.end(), 0);
    const auto& row = e.pivots[idx];
    for (std::size_t t = 1; t < row.size(); ++t) {
      const auto [c, v] = row[t];
      if (free_index[c] >= 0) {
        buf[free_index[c]] = (buf[free_index[c]] + v) % p;
      } else {
        const auto& other = reduced[pivot_index[c]];
        for (std::size_t f = 0; f < nf; ++f)
          if (other[f]) buf[f] = (buf[f] + p - mulmod_small(v, other[f], p)) % p;
      }
    }
    reduced[pivot_index[row.front().first]] = buf;
  }
  k.value.assign(k.pivot_cols.size(), std::vector<std::uint64_t>(nf));
  for (std::size_t i = 0; i < reduced.size(); ++i)
    for (std::size_t f = 0; f < nf; ++f) k.value[i][f] = reduced[i][f] ? p - reduced[i][f] : 0;
  return k;
}

/// a/b with |a|, b <= sqrt(m/2) and a = b u mod m.
bool rational_reconstruct(const Integer& u, const Integer& m, Rational& out) {
  Integer bound = sqrt(Integer(m / 2));
  Integer r0 = m, r1 = u % m, t0 = 0, t1 = 1;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Integer t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return false;
  Integer g = gcd(r1, t1);
  if (g != 1) return false;
  out = Rational(r1, t1);
  out.canonicalize();
  return true;
}

class PrimeSource {
 public:
  PrimeSource(const std::set<Integer>* dens, std::uint64_t seed) : dens_(dens), rng_(seed) {}
  std::uint64_t next() {
    std::uniform_int_distribution<std::uint64_t> dist(1ull << 30, (1ull << 31) - 1);
    for (;;) {
      std::uint64_t p = dist(rng_) | 1;
      if (!is_prime(p) || std::find(used_.begin(), used_.end(), p) != used_.end()) continue;
      bool divides = false;
      for (const auto& d : *dens_)
        if (mpz_fdiv_ui(d.get_mpz_t(), static_cast<unsigned long>(p)) == 0) divides = true;
      if (divides) continue;
      used_.push_back(p);
      return p;
    }
  }

 private:
  const std::set<Integer>* dens_;
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> used_;
};

std::set<Integer> denominators(const SparseMatrix& m) {
  std::set<Integer> dens;
  for (const auto& col : m.columns)
    for (const auto& [i, v] : col)
      if (v.get_den() != 1) dens.insert(v.get_den());
  return dens;
}

struct BlockOutcome {
  bool ok = false;
  std::vector<std::uint64_t> modular_ranks;
  std::uint64_t exact_rank = 0;
  bool exact_path = false;
  std::uint64_t reconstruction_primes = 0;
  std::vector<SparseVector> kernel;  // global column ids
  std::vector<std::uint32_t> free_cols;
};

/// Every row of the block annihilates every vector (local column ids).
bool annihilates(const SparseMatrix& m, const Block& b, const std::vector<SparseVector>& local_kernel) {
  for (const auto& kv : local_kernel) {
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [c, v] : kv)
      for (const auto& [i, a] : m.columns[b.cols[c]]) accumulate(acc, i, a * v);
    if (!acc.empty()) return false;
  }
  return true;
}

void store_kernel(BlockOutcome& out, const Block& b, std::vector<SparseVector>& local_kernel) {
  for (auto& kv : local_kernel) {
    SparseVector global;
    for (const auto& [c, v] : kv) global.emplace_back(b.cols[c], v);
    std::sort(global.begin(), global.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    out.free_cols.push_back(b.cols[kv.front().first]);
    out.kernel.push_back(std::move(global));
  }
}

/// Multi-prime lift of the reduced kernel. Empty optional if reconstruction
/// never verifies within the prime budget.
std::optional<std::vector<SparseVector>> lift_kernel(const SparseMatrix& m, const Block& b,
                                                     const std::vector<ModularElimination>& mods,
                                                     const std::vector<std::uint64_t>& primes, PrimeSource& source,
                                                     std::uint64_t& used) {
  const std::size_t ncols = b.cols.size();
  const auto ref = modular_kernel(mods.front(), ncols, primes.front());
  const std::size_t np = ref.pivot_cols.size(), nf = ref.free_cols.size();
  std::vector<std::vector<Integer>> residue(np, std::vector<Integer>(nf));
  Integer modulus = 1;
  auto absorb = [&](const ModularKernel& k, std::uint64_t p) {
    if (k.pivot_cols != ref.pivot_cols) return false;
    const Integer inv = [&] {
      Integer r;
      Integer pm(static_cast<unsigned long>(p));
      mpz_invert(r.get_mpz_t(), Integer(modulus % pm).get_mpz_t(), pm.get_mpz_t());
      return r;
    }();
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t f = 0; f < nf; ++f) {
        Integer& x = residue[i][f];
        Integer diff = (Integer(static_cast<unsigned long>(k.value[i][f])) - x) % Integer(static_cast<unsigned long>(p));
        if (diff < 0) diff += static_cast<unsigned long>(p);
        diff = diff * inv % Integer(static_cast<unsigned long>(p));
        x += modulus * diff;
      }
    modulus *= static_cast<unsigned long>(p);
    ++used;
    return true;
  };
  absorb(ref, primes.front());
  for (std::size_t t = 1; t < mods.size(); ++t) absorb(modular_kernel(mods[t], ncols, primes[t]), primes[t]);

  constexpr std::uint64_t kMaxPrimes = 512;
  std::uint64_t next_try = used;
  while (used <= kMaxPrimes) {
    if (used >= next_try) {
      next_try = used + std::max<std::uint64_t>(1, used / 4);
      std::vector<SparseVector> local(nf);
      bool ok = true;
      for (std::size_t f = 0; f < nf && ok; ++f) {
        local[f].emplace_back(ref.free_cols[f], Rational(1));
        for (std::size_t i = 0; i < np && ok; ++i) {
          if (residue[i][f] == 0) continue;
          Rational q;
          ok = rational_reconstruct(residue[i][f], modulus, q);
          if (ok) local[f].emplace_back(ref.pivot_cols[i], q);
        }
      }
      if (ok && annihilates(m, b, local)) return local;
    }
    const std::uint64_t p = source.next();
    absorb(modular_kernel(eliminate_mod(b, p), ncols, p), p);
  }
  return std::nullopt;
}

BlockOutcome solve_block(const SparseMatrix& m, const Block& b, const std::vector<std::uint64_t>& primes,
                         const std::set<Integer>& dens, const EliminationOptions& opts) {
  BlockOutcome out;
  const std::size_t ncols = b.cols.size();
  std::vector<ModularElimination> mods;
  for (auto p : primes) {
    mods.push_back(eliminate_mod(b, p));
    out.modular_ranks.push_back(mods.back().rank);
  }
  const std::uint64_t mod_rank = *std::max_element(out.modular_ranks.begin(), out.modular_ranks.end());
  if (std::any_of(out.modular_ranks.begin(), out.modular_ranks.end(), [&](auto r) { return r != mod_rank; }))
    return out;

  out.exact_path = static_cast<std::uint64_t>(b.rows.size()) * ncols <= opts.exact_threshold;
  if (!out.exact_path) {
    // rank over Q is at least any modular rank
    if (mod_rank == ncols) {
      out.exact_rank = mod_rank;
      out.ok = true;
      return out;
    }
    PrimeSource source(&dens, opts.seed ^ (0x51ed270bull * (b.cols.front() + 1)) ^ primes.front());
    auto lifted = lift_kernel(m, b, mods, primes, source, out.reconstruction_primes);
    if (lifted && lifted->size() + mod_rank == ncols) {
      out.exact_rank = mod_rank;
      store_kernel(out, b, *lifted);
      out.ok = true;
      return out;
    }
  }

  ExactEchelon ech(ncols);
  auto row_vector = [&](std::size_t r) {
    SparseVector v;
    v.reserve(b.row_entries[r].size());
    for (const auto& [c, val] : b.row_entries[r]) v.emplace_back(c, *val);
    return v;
  };
  if (out.exact_path) {
    for (std::size_t r = 0; r < b.row_entries.size() && ech.rank() < ncols; ++r) ech.insert(row_vector(r));
  } else {
    for (auto r : mods.front().pivot_rows)
      if (!ech.insert(row_vector(r)))
        throw IdentityFailure("rows independent modulo a prime are dependent over Q");
  }
  out.exact_rank = ech.rank();
  if (out.exact_rank < mod_rank) throw IdentityFailure("exact rank below a modular rank");
  if (out.exact_rank != mod_rank) return out;

  ech.make_reduced();
  std::vector<char> is_pivot(ncols, 0);
  for (const auto& [lead, row] : ech.rows()) is_pivot[lead] = 1;
  std::vector<std::int64_t> slot(ncols, -1);
  std::vector<SparseVector> local_kernel;
  for (std::uint32_t c = 0; c < ncols; ++c)
    if (!is_pivot[c]) {
      slot[c] = static_cast<std::int64_t>(local_kernel.size());
      local_kernel.push_back({{c, Rational(1)}});
    }
  for (const auto& [lead, row] : ech.rows())
    for (const auto& [c, v] : row)
      if (c != lead) local_kernel[slot[c]].emplace_back(lead, -v);
  for (auto& kv : local_kernel)
    std::sort(kv.begin(), kv.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  if (!annihilates(m, b, local_kernel)) return out;
  store_kernel(out, b, local_kernel);
  out.ok = true;
  return out;
}

}  // namespace

std::uint64_t modular_rank(const SparseMatrix& m, std::uint64_t prime) {
  std::uint64_t rank = 0;
  for (const auto& b : split_blocks(m)) rank += eliminate_mod(b, prime).rank;
  return rank;
}

NullspaceResult exact_nullspace(const SparseMatrix& m, const EliminationOptions& opts) {
  if (m.cols > std::numeric_limits<std::uint32_t>::max() || m.rows > std::numeric_limits<std::uint32_t>::max())
    throw UsageError("matrix too large for 32-bit indices");
  if (opts.primes < 1) throw UsageError("at least one prime is required");
  const auto blocks = split_blocks(m);
  const auto dens = denominators(m);
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    PrimeSource source(&dens, opts.seed + 0x9e3779b97f4a7c15ull * attempt);
    std::vector<std::uint64_t> primes;
    for (int i = 0; i < opts.primes; ++i) primes.push_back(source.next());
    std::vector<BlockOutcome> outcomes(blocks.size());
    parallel_for(blocks.size(), opts.threads,
                 [&](std::size_t i) { outcomes[i] = solve_block(m, blocks[i], primes, dens, opts); });
    if (!std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.ok; })) continue;

    NullspaceResult res;
    res.certificate.primes_used = primes;
    res.certificate.modular_ranks.assign(primes.size(), 0);
    res.certificate.exact_confirmed = true;
    res.certificate.attempts = attempt + 1;
    res.certificate.blocks = blocks.size();
    bool any_modular_path = false;
    std::vector<std::pair<std::uint32_t, SparseVector>> basis;
    for (auto& o : outcomes) {
      res.rank += o.exact_rank;
      for (std::size_t p = 0; p < primes.size(); ++p) res.certificate.modular_ranks[p] += o.modular_ranks[p];
      any_modular_path = any_modular_path || !o.exact_path;
      res.certificate.reconstruction_primes = std::max(res.certificate.reconstruction_primes, o.reconstruction_primes);
      for (std::size_t j = 0; j < o.kernel.size(); ++j) basis.emplace_back(o.free_cols[j], std::move(o.kernel[j]));
    }
    res.certificate.method = any_modular_path ? "modular+certificate" : "exact-elimination";
    std::sort(basis.begin(), basis.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [f, v] : basis) {
      res.free_columns.push_back(f);
      res.basis.push_back(std::move(v));
    }
    if (res.rank + res.basis.size() != m.cols) throw IdentityFailure("rank-nullity mismatch in assembled nullspace");
    return res;
  }
  throw IdentityFailure("rank certification failed after " + std::to_string(opts.max_attempts) +
                        " attempts with fresh primes");
}

}  // namespace spencer
