#include "spencer_ops.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace spencer {

std::string to_string(SpencerVariant v) {
  switch (v) {
    case SpencerVariant::classical: return "classical";
    case SpencerVariant::constrained: return "constrained";
    case SpencerVariant::equivalent: return "equivalent-form";
  }
  return "unknown";
}

SpencerVariant parse_variant(std::string_view name) {
  if (name == "classical") return SpencerVariant::classical;
  if (name == "constrained") return SpencerVariant::constrained;
  if (name == "equivalent" || name == "equivalent-form") return SpencerVariant::equivalent;
  throw UsageError("unknown operator variant '" + std::string(name) + "'");
}

namespace {

void add_form(BilinearForm& f, std::uint32_t a, std::uint32_t b, const Rational& v) {
  if (v == 0) return;
  auto [it, inserted] = f.try_emplace({a, b}, v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) f.erase(it);
  }
}

void check_lambda(const LieAlgebra& algebra, const DualVector& lam) {
  if (lam.coefficients.size() != algebra.dim())
    throw UsageError("dual vector has " + std::to_string(lam.coefficients.size()) + " entries, algebra " +
                     algebra.label() + " has dimension " + std::to_string(algebra.dim()));
}

std::uint32_t degree_one_index(const LieAlgebra& algebra, const SymElement& v, std::size_t& count) {
  if (v.degree != 1 || v.ambient_dim != algebra.dim())
    throw UsageError("expected a degree-1 element of " + algebra.label());
  count = v.terms.size();
  return count ? v.terms.begin()->first[0] : 0;
}

/// lam([w, e_t]) for all w, t, stored per t.
std::vector<Combination> pairing_columns(const LieAlgebra& algebra, const DualVector& lam) {
  const std::size_t n = algebra.dim();
  std::vector<Combination> cols(n);
  for (std::uint32_t w = 0; w < n; ++w)
    for (std::uint32_t t = 0; t < n; ++t) {
      Rational s = 0;
      for (const auto& [m, c] : algebra.bracket(w, t)) s += c * lam.coefficients[m];
      if (s != 0) cols[t].emplace_back(w, s);
    }
  return cols;
}

BilinearForm generator_form_with(const LieAlgebra& algebra, const std::vector<Combination>& lam_cols,
                                 const Combination& v) {
  const std::size_t n = algebra.dim();
  // nested[(w1, w2)] = lam([w1, [w2, v]])
  BilinearForm nested;
  for (std::uint32_t w2 = 0; w2 < n; ++w2) {
    auto u = algebra.bracket(Combination{{w2, Rational(1)}}, v);
    for (const auto& [t, ut] : u)
      for (const auto& [w1, val] : lam_cols[t]) add_form(nested, w1, w2, ut * val);
  }
  BilinearForm form;
  for (const auto& [ab, val] : nested) {
    add_form(form, ab.first, ab.second, val / 2);
    add_form(form, ab.second, ab.first, val / 2);
  }
  return form;
}

}  // namespace

BilinearForm generator_form(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v) {
  check_lambda(algebra, lam);
  std::size_t count = 0;
  degree_one_index(algebra, v, count);
  return generator_form_with(algebra, pairing_columns(algebra, lam), v.to_combination());
}

BilinearForm equivalent_form(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v) {
  check_lambda(algebra, lam);
  std::size_t count = 0;
  degree_one_index(algebra, v, count);
  const auto vc = v.to_combination();
  const std::size_t n = algebra.dim();
  BilinearForm form;
  for (std::uint32_t w1 = 0; w1 < n; ++w1) {
    const Combination x1{{w1, Rational(1)}};
    const auto w1v = algebra.bracket(x1, vc);
    for (std::uint32_t w2 = 0; w2 < n; ++w2) {
      const Combination x2{{w2, Rational(1)}};
      Rational value = algebra.pair(lam, algebra.bracket(x2, w1v));
      value += algebra.pair(lam, algebra.bracket(algebra.bracket(x1, x2), vc)) / 2;
      add_form(form, w1, w2, value);
    }
  }
  return form;
}

SymElement form_to_sym2(const LieAlgebra& algebra, const BilinearForm& form) {
  const auto& kinv = algebra.killing_inverse();
  if (!kinv) throw UsageError("Killing form of " + algebra.label() + " is degenerate; cannot identify g with g*");
  SymElement out = SymElement::zero(algebra.dim(), 2);
  for (const auto& [ab, b] : form)
    for (const auto& [c, kca] : (*kinv)[ab.first])
      for (const auto& [d, kbd] : (*kinv)[ab.second]) {
        Monomial m{static_cast<std::uint16_t>(std::min(c, d)), static_cast<std::uint16_t>(std::max(c, d))};
        out.add(m, kca * b * kbd);
      }
  return out;
}

SymElement delta_on_generator(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v) {
  return form_to_sym2(algebra, generator_form(algebra, lam, v));
}

SymElement delta_equivalent(const LieAlgebra& algebra, const DualVector& lam, const SymElement& v) {
  return form_to_sym2(algebra, equivalent_form(algebra, lam, v));
}

// ---------------------------------------------------------------------------
// Operator

SpencerOperator::SpencerOperator(SpencerVariant v, std::optional<DualVector> lam, std::vector<SymElement> images)
    : variant_(v), lambda_(std::move(lam)), image_elements_(std::move(images)) {
  images_.resize(image_elements_.size());
  for (std::size_t i = 0; i < image_elements_.size(); ++i)
    for (const auto& [m, c] : image_elements_[i].terms) images_[i].push_back(Term{m[0], m[1], c});
}

SpencerOperator SpencerOperator::classical(const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<SymElement> images;
  for (std::uint32_t x = 0; x < n; ++x) {
    SymElement img = SymElement::zero(n, 2);
    for (std::uint32_t i = 0; i < n; ++i)
      for (const auto& [t, c] : algebra.bracket(i, x))
        img.add(Monomial{static_cast<std::uint16_t>(std::min(i, t)), static_cast<std::uint16_t>(std::max(i, t))}, c);
    images.push_back(std::move(img));
  }
  return SpencerOperator(SpencerVariant::classical, std::nullopt, std::move(images));
}

SpencerOperator SpencerOperator::constrained(const LieAlgebra& algebra, const DualVector& lam) {
  check_lambda(algebra, lam);
  const auto cols = pairing_columns(algebra, lam);
  std::vector<SymElement> images;
  for (std::uint32_t x = 0; x < algebra.dim(); ++x)
    images.push_back(form_to_sym2(algebra, generator_form_with(algebra, cols, Combination{{x, Rational(1)}})));
  return SpencerOperator(SpencerVariant::constrained, lam, std::move(images));
}

SpencerOperator SpencerOperator::equivalent(const LieAlgebra& algebra, const DualVector& lam) {
  check_lambda(algebra, lam);
  std::vector<SymElement> images;
  for (std::uint32_t x = 0; x < algebra.dim(); ++x)
    images.push_back(delta_equivalent(algebra, lam, SymElement::basis(algebra.dim(), {static_cast<std::uint16_t>(x)})));
  return SpencerOperator(SpencerVariant::equivalent, lam, std::move(images));
}

SymElement SpencerOperator::apply(const SymElement& s) const {
  if (s.ambient_dim != ambient_dim()) throw UsageError("element does not belong to the operator's algebra");
  SymElement out = SymElement::zero(ambient_dim(), s.degree + 1);
  Monomial scratch;
  for (const auto& [m, coef] : s.terms) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const bool negative = graded() && (j % 2 == 1);
      for (const auto& t : images_[m[j]]) {
        scratch.clear();
        for (std::size_t q = 0; q < m.size(); ++q)
          if (q != j) scratch.push_back(m[q]);
        scratch.push_back(t.c);
        scratch.push_back(t.d);
        std::sort(scratch.begin(), scratch.end());
        out.add(scratch, negative ? Rational(-coef * t.coef) : Rational(coef * t.coef));
      }
    }
  }
  return out;
}

SymElement SpencerOperator::apply_split(const Monomial& left, const Monomial& right) const {
  const std::size_t n = ambient_dim();
  SymElement l = SymElement::basis(n, left), r = SymElement::basis(n, right);
  SymElement first = sym_product(apply(l), r);
  SymElement second = sym_product(l, apply(r));
  if (graded() && left.size() % 2 == 1) return first - second;
  return first + second;
}

void SpencerOperator::accumulate(const Monomial& m, const Rational& scale, const MonomialIndexer& target,
                                 std::vector<std::pair<std::uint64_t, Rational>>& acc) const {
  const std::size_t k = m.size();
  Monomial scratch(k + 1);
  for (std::size_t j = 0; j < k; ++j) {
    const bool negative = graded() && (j % 2 == 1);
    for (const auto& t : images_[m[j]]) {
      std::size_t w = 0;
      for (std::size_t q = 0; q < k; ++q)
        if (q != j) scratch[w++] = m[q];
      scratch[w++] = t.c;
      scratch[w++] = t.d;
      std::sort(scratch.begin(), scratch.end());
      Rational v = scale * t.coef;
      if (negative) v = -v;
      acc.emplace_back(target.rank(scratch), std::move(v));
    }
  }
}

namespace {

SparseVector collapse(std::vector<std::pair<std::uint64_t, Rational>>& acc) {
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector column;
  for (std::size_t i = 0; i < acc.size();) {
    Rational s = acc[i].second;
    std::size_t e = i + 1;
    while (e < acc.size() && acc[e].first == acc[i].first) s += acc[e++].second;
    if (s != 0) column.emplace_back(static_cast<std::uint32_t>(acc[i].first), s);
    i = e;
  }
  return column;
}

}  // namespace

SparseMatrix SpencerOperator::matrix(int k, const AssemblyOptions& opts) const {
  if (k < 1) throw UsageError("operator degree k must be >= 1");
  const std::size_t n = ambient_dim();
  const std::uint64_t rows = sym_dim(n, k + 1);
  if (rows > opts.max_dim) throw ResourceCapError("Sym^" + std::to_string(k + 1) + " of dimension-" + std::to_string(n) + " algebra", rows, opts.max_dim);
  const auto basis = enumerate_basis(n, k, opts.max_dim);
  const MonomialIndexer target(n, k + 1);
  SparseMatrix out(rows, basis.size());
  parallel_for(basis.size(), opts.threads, [&](std::size_t col) {
    std::vector<std::pair<std::uint64_t, Rational>> acc;
    accumulate(basis[col], Rational(1), target, acc);
    out.columns[col] = collapse(acc);
  });
  return out;
}

SparseMatrix SpencerOperator::compose_after(const SparseMatrix& first, int k, const AssemblyOptions& opts) const {
  const std::size_t n = ambient_dim();
  if (first.rows != sym_dim(n, k + 1)) throw UsageError("composite: first factor does not map into Sym^" + std::to_string(k + 1));
  const std::uint64_t rows = sym_dim(n, k + 2);
  // the target space is only indexed, never stored
  if (rows > std::numeric_limits<std::uint32_t>::max())
    throw ResourceCapError("Sym^" + std::to_string(k + 2) + " index space", rows, std::numeric_limits<std::uint32_t>::max());
  const MonomialIndexer middle(n, k + 1), target(n, k + 2);
  SparseMatrix out(rows, first.cols);
  parallel_for(first.cols, opts.threads, [&](std::size_t col) {
    std::vector<std::pair<std::uint64_t, Rational>> acc;
    for (const auto& [i, v] : first.columns[col]) accumulate(middle.unrank(i), v, target, acc);
    out.columns[col] = collapse(acc);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Matrices and audits

SpencerMatrix delta_classical(const LieAlgebra& algebra, int k, const AssemblyOptions& opts) {
  return SpencerMatrix{SpencerVariant::classical, std::nullopt, k, k + 1,
                       SpencerOperator::classical(algebra).matrix(k, opts)};
}

SpencerMatrix delta_constrained(const DualVector& lam, const LieAlgebra& algebra, int k, const AssemblyOptions& opts) {
  return SpencerMatrix{SpencerVariant::constrained, lam, k, k + 1,
                       SpencerOperator::constrained(algebra, lam).matrix(k, opts)};
}

SpencerMatrix delta_equivalent_matrix(const DualVector& lam, const LieAlgebra& algebra, int k,
                                      const AssemblyOptions& opts) {
  return SpencerMatrix{SpencerVariant::equivalent, lam, k, k + 1,
                       SpencerOperator::equivalent(algebra, lam).matrix(k, opts)};
}

MirrorReport verify_mirror(const DualVector& lam, const LieAlgebra& algebra, int k, const AssemblyOptions& opts) {
  const auto plus = delta_constrained(lam, algebra, k, opts).entries;
  const auto minus = delta_constrained(-lam, algebra, k, opts).entries;
  const auto sum = plus + minus;
  MirrorReport r;
  r.rows = plus.rows;
  r.cols = plus.cols;
  r.max_abs_sum = sum.max_abs_entry();
  r.max_abs_operator = plus.max_abs_entry();
  r.holds = sum.is_zero();
  return r;
}

NilpotencyReport nilpotency_audit(const DualVector& lam, const LieAlgebra& algebra, int k, const AssemblyOptions& opts,
                                  const EliminationOptions& elim) {
  const auto op = SpencerOperator::constrained(algebra, lam);
  const auto first = op.matrix(k, opts);
  const auto composite = op.compose_after(first, k, opts);
  NilpotencyReport r;
  r.k = k;
  r.rows = composite.rows;
  r.cols = composite.cols;
  r.nnz = composite.nnz();
  r.max_abs_entry = composite.max_abs_entry();
  r.is_zero = composite.is_zero();
  r.rank = r.is_zero ? 0 : exact_nullspace(composite, elim).rank;
  return r;
}

DualVector lambda_from_spec(const LieAlgebra& algebra, std::string_view spec) {
  const std::size_t n = algebra.dim();
  if (!spec.empty() && spec.front() == '-') return -lambda_from_spec(algebra, spec.substr(1));
  auto bad = [&](const std::string& why) { return UsageError("lambda spec '" + std::string(spec) + "': " + why); };
  auto seed_of = [&](std::string_view s) {
    std::uint64_t seed = 0;
    if (s.empty()) throw bad("missing seed");
    for (char c : s) {
      if (c < '0' || c > '9') throw bad("seed must be a nonnegative integer");
      seed = seed * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return seed;
  };
  DualVector lam = DualVector::zero(n);
  if (spec == "zero" || spec == "preset:zero") return lam;
  if (spec.rfind("preset:cartan", 0) == 0) {
    auto idx = seed_of(spec.substr(13));
    if (idx < 1 || idx > static_cast<std::uint64_t>(algebra.rank()))
      throw bad("Cartan index must be in 1.." + std::to_string(algebra.rank()));
    lam.coefficients[idx - 1] = 1;
    return lam;
  }
  if (spec.rfind("random:", 0) == 0 || spec.rfind("sparse:", 0) == 0) {
    const bool sparse = spec.front() == 's';
    std::mt19937_64 rng(seed_of(spec.substr(7)));
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    auto draw_nonzero = [&] {
      int a = 0;
      while (a == 0) a = num(rng);
      return Rational(a, den(rng));
    };
    if (sparse) {
      std::uniform_int_distribution<std::size_t> pos(0, n - 1), count(1, std::min<std::size_t>(3, n));
      for (std::size_t c = count(rng); c > 0; --c) lam.coefficients[pos(rng)] = draw_nonzero();
    } else {
      for (auto& x : lam.coefficients) {
        x = Rational(num(rng), den(rng));
        x.canonicalize();
      }
      if (lam.is_zero()) lam.coefficients[0] = draw_nonzero();
    }
    for (auto& x : lam.coefficients) x.canonicalize();
    return lam;
  }
  if (spec.rfind("coeffs:", 0) == 0) {
    std::string_view rest = spec.substr(7);
    std::vector<Rational> coeffs;
    while (!rest.empty()) {
      auto comma = rest.find(',');
      coeffs.push_back(parse_rational(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (coeffs.size() != n) throw bad("expected " + std::to_string(n) + " coefficients");
    lam.coefficients = std::move(coeffs);
    return lam;
  }
  throw bad("expected preset:zero, preset:cartan<i>, random:<seed>, sparse:<seed> or coeffs:<list>");
}

}  // namespace spencer
