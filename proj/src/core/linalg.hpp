#pragma once

#include "lie_core.hpp"
#include "rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace spencer {

/// Sparse exact vector: (index, value) sorted by index, zero-free.
using SparseVector = Combination;

/// Column-major sparse matrix over the rationals.
struct SparseMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<SparseVector> columns;

  SparseMatrix() = default;
  SparseMatrix(std::uint64_t r, std::uint64_t c) : rows(r), cols(c), columns(c) {}

  std::uint64_t nnz() const;
  bool is_zero() const { return nnz() == 0; }
  Rational max_abs_entry() const;
  SparseVector apply(const SparseVector& x) const;
  SparseMatrix scaled(const Rational& c) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;
};

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// Columns laid side by side; all must share the row count.
SparseMatrix from_columns(std::uint64_t rows, std::vector<SparseVector> columns);
/// Block-diagonal Kronecker product a (x) I_m.
SparseMatrix kron_identity(const SparseMatrix& a, std::uint64_t m);

/// Coordinate Matrix Market with exact rational tokens ("num/den").
void write_matrix_market(std::ostream& out, const SparseMatrix& m, const std::string& comment = {});
SparseMatrix read_matrix_market(std::istream& in);

struct RankCertificate {
  std::vector<std::uint64_t> primes_used;
  std::vector<std::uint64_t> modular_ranks;
  bool exact_confirmed = false;
  std::string method;  // "exact-elimination" or "modular+certificate"
  int attempts = 1;
  std::uint64_t blocks = 0;
  /// Largest number of primes used to lift a kernel block (0 if none was lifted).
  std::uint64_t reconstruction_primes = 0;
};

struct NullspaceResult {
  std::uint64_t rank = 0;
  /// Reduced basis: vector j carries a 1 at free column free_columns[j] and 0 at
  /// every other free column.
  std::vector<SparseVector> basis;
  std::vector<std::uint32_t> free_columns;
  RankCertificate certificate;
};

struct EliminationOptions {
  unsigned threads = 1;
  std::uint64_t seed = 0x5eed'2024;
  int primes = 3;
  int max_attempts = 3;
  /// Blocks with rows*cols at or below this go straight to exact elimination.
  std::uint64_t exact_threshold = 20'000;
};

/// Exact nullspace. The matrix is split into independent blocks (connected
/// components of the row/column incidence graph); each block is ranked modulo
/// several random word-size primes and the result is confirmed exactly: the
/// modular pivot rows are independent over Q and the returned basis is checked to
/// be annihilated by every row. Throws IdentityFailure if confirmation keeps failing.
NullspaceResult exact_nullspace(const SparseMatrix& m, const EliminationOptions& opts = {});

std::uint64_t modular_rank(const SparseMatrix& m, std::uint64_t prime);
bool is_prime(std::uint64_t n);

/// Incrementally built exact echelon basis of a subspace of Q^n.
class ExactEchelon {
 public:
  explicit ExactEchelon(std::size_t n) : n_(n) {}
  /// Returns true if v was independent of the current span.
  bool insert(const SparseVector& v);
  SparseVector reduce(const SparseVector& v) const;
  bool contains(const SparseVector& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }
  std::size_t ambient_dim() const { return n_; }
  /// Back-substitutes to reduced row echelon form.
  void make_reduced();
  const std::map<std::uint32_t, SparseVector>& rows() const { return rows_; }

 private:
  std::size_t n_;
  std::map<std::uint32_t, SparseVector> rows_;  // leading column -> normalized row
};

std::size_t span_rank(const std::vector<SparseVector>& vectors, std::size_t n);
bool same_span(const std::vector<SparseVector>& a, const std::vector<SparseVector>& b, std::size_t n);

}  // namespace spencer
