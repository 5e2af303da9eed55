#pragma once

#include "linalg.hpp"
#include "lie_core.hpp"
#include "sym_algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spencer {

enum class SpencerVariant { classical, constrained, equivalent };

std::string to_string(SpencerVariant v);
SpencerVariant parse_variant(std::string_view name);

/// Symmetric bilinear form on the algebra, keyed by ordered basis pairs.
using BilinearForm = std::map<std::pair<std::uint32_t, std::uint32_t>, Rational>;

/// (w1, w2) -> 1/2 (<lam, [w1,[w2,v]]> + <lam, [w2,[w1,v]]>) over all basis pairs.
BilinearForm generator_form(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v);
/// (w1, w2) -> <lam, [w2,[w1,v]]> + 1/2 <lam, [[w1,w2],v]>, evaluated independently.
BilinearForm equivalent_form(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v);
/// Transports a form to Sym^2 through the inverse Killing form: B -> sum_{c,d} (K^-1 B K^-1)_{cd} x_c x_d.
SymElement form_to_sym2(const LieAlgebra& algebra, const BilinearForm& form);

SymElement delta_on_generator(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v);
SymElement delta_equivalent(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v);

struct AssemblyOptions {
  unsigned threads = 1;
  std::uint64_t max_dim = kDefaultDimCap;
};

/// A degree +1 operator on Sym(g) fixed by its generator images. The constrained
/// and equivalent variants extend by the graded rule
///   delta(x_{i1} . rest) = delta(x_{i1}) . rest - x_{i1} . delta(rest)
/// splitting off the first (smallest) index; the classical operator uses the
/// ungraded rule with generator images sum_i e_i . [e_i, x].
class SpencerOperator {
 public:
  static SpencerOperator classical(const LieAlgebra& algebra);
  static SpencerOperator constrained(const LieAlgebra& algebra, const DualVector& lam);
  static SpencerOperator equivalent(const LieAlgebra& algebra, const DualVector& lam);

  SpencerVariant variant() const { return variant_; }
  const std::optional<DualVector>& lambda() const { return lambda_; }
  std::size_t ambient_dim() const { return images_.size(); }
  const SymElement& generator_image(std::size_t i) const { return image_elements_[i]; }

  SymElement apply(const SymElement& s) const;
  /// Applies the operator to a monomial split as (left) . (right), using the
  /// graded two-term rule with deg(left) as the sign exponent.
  SymElement apply_split(const Monomial& left, const Monomial& right) const;
  SparseMatrix matrix(int k, const AssemblyOptions& opts = {}) const;
  /// delta^{k+1} . first for a matrix `first` with rows in Sym^{k+1}, column by column.
  SparseMatrix compose_after(const SparseMatrix& first, int k, const AssemblyOptions& opts = {}) const;

 private:
  struct Term {
    std::uint16_t c, d;
    Rational coef;
  };
  SpencerOperator(SpencerVariant v, std::optional<DualVector> lam, std::vector<SymElement> images);
  bool graded() const { return variant_ != SpencerVariant::classical; }
  void accumulate(const Monomial& m, const Rational& scale, const MonomialIndexer& target,
                  std::vector<std::pair<std::uint64_t, Rational>>& acc) const;

  SpencerVariant variant_;
  std::optional<DualVector> lambda_;
  std::vector<SymElement> image_elements_;
  std::vector<std::vector<Term>> images_;
};

struct SpencerMatrix {
  SpencerVariant variant = SpencerVariant::constrained;
  std::optional<DualVector> lambda;
  int k_from = 1;
  int k_to = 2;
  SparseMatrix entries;
};

SpencerMatrix delta_classical(const LieAlgebra& algebra, int k, const AssemblyOptions& opts = {});
SpencerMatrix delta_constrained(const DualVector& lam, const LieAlgebra& algebra, int k,
                                const AssemblyOptions& opts = {});
SpencerMatrix delta_equivalent_matrix(const DualVector& lam, const LieAlgebra& algebra, int k,
                                      const AssemblyOptions& opts = {});

struct MirrorReport {
  bool holds = false;
  Rational max_abs_sum;       // max |entry| of delta(-lam) + delta(lam)
  Rational max_abs_operator;  // max |entry| of delta(lam), for scale
  std::uint64_t rows = 0, cols = 0;
};
MirrorReport verify_mirror(const DualVector& lam, const LieAlgebra& algebra, int k, const AssemblyOptions& opts = {});

struct NilpotencyReport {
  int k = 1;
  std::uint64_t rows = 0, cols = 0, nnz = 0, rank = 0;
  Rational max_abs_entry;
  bool is_zero = false;
};
/// Measures delta^{k+1} . delta^k exactly; nothing is assumed about the outcome.
NilpotencyReport nilpotency_audit(const DualVector& lam, const LieAlgebra& algebra, int k,
                                  const AssemblyOptions& opts = {}, const EliminationOptions& elim = {});

/// Dual vector from a textual spec: "preset:zero", "preset:cartan<i>", "random:<seed>",
/// "sparse:<seed>", "coeffs:<q1>,<q2>,...". A leading '-' negates.
DualVector lambda_from_spec(const LieAlgebra& algebra, std::string_view spec);

}  // namespace spencer
