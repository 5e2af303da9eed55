#include "doctest.h"

#include "errors.hpp"
#include "oracle_dense.hpp"
#include "spencer_ops.hpp"

#include <fstream>
#include <random>

using namespace spencer;

namespace {

SparseMatrix golden_mtx(const std::string& name) {
  std::ifstream in(std::string(GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  return read_matrix_market(in);
}

SparseMatrix from_dense(const oracle::Dense& d) {
  const std::size_t cols = d.empty() ? 0 : d[0].size();
  SparseMatrix m(d.size(), cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i][j] != 0) m.columns[j].emplace_back(static_cast<std::uint32_t>(i), d[i][j]);
  return m;
}

Rational form_at(const BilinearForm& f, std::uint32_t a, std::uint32_t b) {
  auto it = f.find({a, b});
  return it == f.end() ? Rational(0) : it->second;
}

constexpr std::uint32_t H = 0, E = 1, F = 2;

}  // namespace

TEST_CASE("classical operator on sl2") {
  const auto g = make_algebra("A1");
  const auto op = SpencerOperator::classical(g);
  SymElement want = SymElement::zero(3, 2);
  want.add({E, E}, -2);
  want.add({F, F}, 2);
  CHECK(op.generator_image(H) == want);
  CHECK(op.matrix(1) == golden_mtx("a1_classical_k1.mtx"));
}

TEST_CASE("abelian toy algebra gives the zero operator") {
  LieAlgebra ab("abelian3", {"a", "b", "c"}, {});
  const auto op = SpencerOperator::classical(ab);
  for (int k = 1; k <= 3; ++k) CHECK(op.matrix(k).is_zero());
}

TEST_CASE("generator forms on sl2") {
  const auto g = make_algebra("A1");
  const DualVector hstar{{1, 0, 0}};
  const auto fh = generator_form(g, hstar, SymElement::basis(3, {H}));
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b) {
      const bool ef = (a == E && b == F) || (a == F && b == E);
      CHECK(form_at(fh, a, b) == (ef ? 2 : 0));
    }
  const auto fe = generator_form(g, hstar, SymElement::basis(3, {E}));
  CHECK(form_at(fe, F, H) == -1);
  CHECK(form_at(fe, H, F) == -1);
  for (auto [a, b] : {std::pair{E, E}, {F, F}, {H, H}, {E, H}, {E, F}}) CHECK(form_at(fe, a, b) == 0);
  CHECK(generator_form(g, DualVector::zero(3), SymElement::basis(3, {E})).empty());
  CHECK(delta_on_generator(g, DualVector::zero(3), SymElement::basis(3, {H})).is_zero());
}

TEST_CASE("generator images match the hand values") {
  const auto g = make_algebra("A1");
  const auto op = SpencerOperator::constrained(g, DualVector{{1, 0, 0}});
  SymElement h = SymElement::zero(3, 2), e = SymElement::zero(3, 2), f = SymElement::zero(3, 2);
  h.add({E, F}, Rational(1, 4));
  e.add({H, E}, Rational(-1, 16));
  f.add({H, F}, Rational(-1, 16));
  CHECK(op.generator_image(H) == h);
  CHECK(op.generator_image(E) == e);
  CHECK(op.generator_image(F) == f);
}

TEST_CASE("A1 h* matrices equal the goldens") {
  const auto g = make_algebra("A1");
  const DualVector hstar{{1, 0, 0}};
  CHECK(delta_constrained(hstar, g, 1).entries == golden_mtx("a1_hstar_k1.mtx"));
  const auto m2 = delta_constrained(hstar, g, 2).entries;
  CHECK(m2.rows == 10);
  CHECK(m2.cols == 6);
  CHECK(m2 == golden_mtx("a1_hstar_k2.mtx"));
}

TEST_CASE("zero lambda gives zero matrices") {
  for (const char* label : {"A1", "A2", "G2"}) {
    const auto g = make_algebra(label);
    for (int k = 1; k <= 2; ++k) CHECK(delta_constrained(DualVector::zero(g.dim()), g, k).entries.is_zero());
  }
}

TEST_CASE("two-term Leibniz on degree-2 monomials") {
  const auto g = make_algebra("A2");
  const auto lam = lambda_from_spec(g, "random:3");
  const auto op = SpencerOperator::constrained(g, lam);
  for (std::uint16_t a = 0; a < 8; ++a)
    for (std::uint16_t b = a; b < 8; ++b) {
      const auto va = SymElement::basis(8, {a}), vb = SymElement::basis(8, {b});
      const auto want = sym_product(op.apply(va), vb) - sym_product(va, op.apply(vb));
      CHECK(op.apply(SymElement::basis(8, {a, b})) == want);
    }
}

TEST_CASE("split rule agrees with the left-first rule") {
  const auto g = make_algebra("A2");
  const auto op = SpencerOperator::constrained(g, lambda_from_spec(g, "random:4"));
  const Monomial m{0, 3, 5, 7};
  CHECK(op.apply_split({0, 3}, {5, 7}) == op.apply(SymElement::basis(8, m)));
  CHECK(op.apply_split({0}, {3, 5, 7}) == op.apply(SymElement::basis(8, m)));
}

TEST_CASE("sparse pipeline equals the dense oracle") {
  for (const char* label : {"A1", "A2", "B2"})
    for (const char* spec : {"random:1", "random:2", "preset:cartan1"}) {
      CAPTURE(label);
      CAPTURE(spec);
      const auto g = make_algebra(label);
      const auto d = oracle::densify(g);
      const auto lam = lambda_from_spec(g, spec);
      const auto images = oracle::constrained_images(d, lam.coefficients);
      for (int k = 1; k <= 2; ++k)
        CHECK(delta_constrained(lam, g, k).entries == from_dense(oracle::operator_matrix(images, g.dim(), k, true)));
      const auto cl = oracle::classical_images(d);
      CHECK(delta_classical(g, 2).entries == from_dense(oracle::operator_matrix(cl, g.dim(), 2, false)));
    }
}

TEST_CASE("equivalent form agrees with the defining form") {
  const auto a1 = make_algebra("A1");
  const DualVector hstar{{1, 0, 0}};
  for (std::uint16_t v = 0; v < 3; ++v) {
    const auto s = SymElement::basis(3, {v});
    CHECK(equivalent_form(a1, hstar, s) == generator_form(a1, hstar, s));
    CHECK(delta_equivalent(a1, hstar, s) == delta_on_generator(a1, hstar, s));
  }
  CHECK(delta_equivalent(a1, DualVector::zero(3), SymElement::basis(3, {H})).is_zero());
  const auto a2 = make_algebra("A2");
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto lam = lambda_from_spec(a2, "random:" + std::to_string(100 + trial));
    SymElement v = SymElement::zero(8, 1);
    for (std::uint16_t i = 0; i < 8; ++i) v.add({i}, Rational(num(rng)));
    if (v.is_zero()) continue;
    CHECK(delta_equivalent(a2, lam, v) == delta_on_generator(a2, lam, v));
  }
  CHECK(delta_equivalent_matrix(lambda_from_spec(a2, "random:5"), a2, 2).entries ==
        delta_constrained(lambda_from_spec(a2, "random:5"), a2, 2).entries);
}

TEST_CASE("mirror antisymmetry") {
  const auto a1 = make_algebra("A1");
  for (int k = 1; k <= 3; ++k) {
    CHECK(verify_mirror(DualVector{{1, 0, 0}}, a1, k).holds);
    CHECK(verify_mirror(DualVector::zero(3), a1, k).holds);
  }
  const auto e7 = make_algebra("E7");
  const auto r = verify_mirror(lambda_from_spec(e7, "sparse:9"), e7, 1);
  CHECK(r.holds);
  CHECK(r.max_abs_sum == 0);
  CHECK(r.rows == 8911);
}

TEST_CASE("nilpotency audit, A1 h* against the sl2 oracle golden") {
  std::ifstream in(std::string(GOLDEN_DIR) + "/a1_hstar_audit.json");
  const auto golden = nlohmann::json::parse(in);
  const auto g = make_algebra("A1");
  for (const auto& row : golden["nilpotency"]) {
    const auto r = nilpotency_audit(DualVector{{1, 0, 0}}, g, row["k"].get<int>());
    CHECK(r.rows == row["rows"].get<std::uint64_t>());
    CHECK(r.cols == row["cols"].get<std::uint64_t>());
    CHECK(r.nnz == row["nnz"].get<std::uint64_t>());
    CHECK(r.rank == row["rank"].get<std::uint64_t>());
    CHECK(to_string(r.max_abs_entry) == row["max_abs_entry"].get<std::string>());
    CHECK(r.is_zero == row["is_zero"].get<bool>());
  }
  CHECK(nilpotency_audit(DualVector::zero(3), g, 1).is_zero);
}

TEST_CASE("nilpotency audit, A2 presets against the dense golden") {
  std::ifstream in(std::string(GOLDEN_DIR) + "/a2_nilpotency.json");
  const auto golden = nlohmann::json::parse(in);
  const auto g = make_algebra("A2");
  for (const auto& row : golden["audits"]) {
    CAPTURE(row.dump());
    const auto r = nilpotency_audit(lambda_from_spec(g, row["lambda"].get<std::string>()), g, row["k"].get<int>());
    CHECK(r.rows == row["rows"].get<std::uint64_t>());
    CHECK(r.nnz == row["nnz"].get<std::uint64_t>());
    CHECK(r.rank == row["rank"].get<std::uint64_t>());
    CHECK(to_string(r.max_abs_entry) == row["max_abs_entry"].get<std::string>());
    CHECK(r.is_zero == row["is_zero"].get<bool>());
  }
}

TEST_CASE("composite equals the product of assembled matrices") {
  const auto g = make_algebra("G2");
  const auto op = SpencerOperator::constrained(g, lambda_from_spec(g, "random:8"));
  const auto first = op.matrix(1);
  CHECK(op.compose_after(first, 1) == multiply(op.matrix(2), first));
}

TEST_CASE("lambda specs") {
  const auto g = make_algebra("A2");
  CHECK(lambda_from_spec(g, "preset:zero").is_zero());
  CHECK(lambda_from_spec(g, "preset:cartan2").coefficients[1] == 1);
  CHECK(lambda_from_spec(g, "random:5").coefficients == lambda_from_spec(g, "random:5").coefficients);
  CHECK(lambda_from_spec(g, "-random:5").coefficients == (-lambda_from_spec(g, "random:5")).coefficients);
  CHECK(lambda_from_spec(g, "coeffs:1,0,0,0,0,0,0,-1/2").coefficients[7] == Rational(-1, 2));
  CHECK_THROWS_AS(lambda_from_spec(g, "preset:cartan3"), UsageError);
  CHECK_THROWS_AS(lambda_from_spec(g, "coeffs:1,2"), UsageError);
  CHECK_THROWS_AS(lambda_from_spec(g, "bogus"), UsageError);
}

TEST_CASE("resource cap refuses with dimensions") {
  const auto g = make_algebra("E7");
  AssemblyOptions opts;
  opts.max_dim = 100'000;
  try {
    (void)delta_constrained(lambda_from_spec(g, "preset:cartan1"), g, 2, opts);
    FAIL("no refusal");
  } catch (const ResourceCapError& e) {
    CHECK(e.requested() == 400995);
    CHECK(std::string(e.what()).find("400995") != std::string::npos);
  }
}
