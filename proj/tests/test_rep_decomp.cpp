#include "doctest.h"

#include "errors.hpp"
#include "kernel_lab.hpp"
#include "oracle_dense.hpp"
#include "rep_decomp.hpp"

#include <fstream>

using namespace spencer;

namespace {

using Char = std::map<Weight, Rational>;

Weight scale(const Weight& w, int s) {
  Weight out = w;
  for (auto& x : out) x *= s;
  return out;
}

Char convolve(const Char& a, const Char& b) {
  Char out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      Weight w = wa;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += wb[i];
      out[w] += ca * cb;
    }
  return out;
}

// Newton: k h_k = sum_{i=1..k} p_i h_{k-i}, p_i = sum over adjoint weights of e^{i w}.
WeightMultiset sym_power_by_newton(const LieAlgebra& g, int k) {
  const auto& weights = g.basis_weights();
  const int r = g.rank();
  std::vector<Char> h(k + 1);
  h[0][Weight(r, 0)] = 1;
  for (int m = 1; m <= k; ++m) {
    Char acc;
    for (int i = 1; i <= m; ++i) {
      Char p;
      for (const auto& w : weights) p[scale(w, i)] += 1;
      for (const auto& [w, c] : convolve(p, h[m - i])) acc[w] += c;
    }
    for (auto& [w, c] : acc) c /= m;
    h[m] = acc;
  }
  WeightMultiset out;
  for (const auto& [w, c] : h[k]) {
    REQUIRE(c.get_den() == 1);
    if (c != 0) out[w] = c.get_num().get_si();
  }
  return out;
}

std::vector<long> dims_of(const std::vector<IrrepSummand>& s) {
  std::vector<long> out;
  for (const auto& x : s)
    for (std::int64_t i = 0; i < x.multiplicity; ++i) out.push_back(x.dim.get_si());
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST_CASE("ad action on Sym") {
  const auto g = make_algebra("A1");
  const Combination h{{0, Rational(1)}};
  CHECK(ad_action_on_sym(g, h, SymElement::basis(3, {1, 1})) == SymElement::basis(3, {1, 1}).scaled(4));
  CHECK(ad_action_on_sym(g, h, SymElement::basis(3, {1, 2})).is_zero());
  CHECK(ad_action_on_sym(g, h, SymElement::one(3)).is_zero());
  // agrees with the dense oracle on A2
  const auto a2 = make_algebra("A2");
  const auto d = oracle::densify(a2);
  for (std::uint32_t x = 0; x < 8; ++x) {
    const auto got = ad_action_on_sym(a2, Combination{{x, Rational(1)}}, SymElement::basis(8, {2, 5, 5}));
    const auto want = oracle::ad_on_poly(d, x, {{oracle::Mono{2, 5, 5}, 1}});
    REQUIRE(got.terms.size() == want.size());
    for (const auto& [m, c] : want) CHECK(got.terms.at(Monomial(m.begin(), m.end())) == c);
  }
}

TEST_CASE("submodule checks") {
  const auto g = make_algebra("A2");
  const auto full = kernel(delta_constrained(DualVector::zero(8), g, 2), 8);
  CHECK(is_g_submodule(g, full).holds);
  const auto empty = kernel(delta_constrained(lambda_from_spec(g, "random:11"), g, 1), 8);
  REQUIRE(empty.dim() == 0);
  CHECK(is_g_submodule(g, empty).holds);

  std::ifstream in(std::string(GOLDEN_DIR) + "/a2_random11.json");
  const auto gold = nlohmann::json::parse(in);
  const auto kb = kernel(delta_constrained(lambda_from_spec(g, gold["lambda"].get<std::string>()), g, 2), 8);
  const auto r = is_g_submodule(g, kb);
  CHECK(r.holds == gold["submodule"]["holds"].get<bool>());
  CHECK(r.checked == gold["submodule"]["checked"].get<std::uint64_t>());
  CHECK(r.violation_count == gold["submodule"]["violations"].get<std::uint64_t>());
}

TEST_CASE("weights of full Sym^2(A1)") {
  const auto g = make_algebra("A1");
  const auto full = kernel(delta_constrained(DualVector::zero(3), g, 2), 3);
  const auto wd = weight_decomposition(g, full);
  CHECK(wd.cartan_stable);
  CHECK(wd.weights == WeightMultiset{{{4}, 1}, {{2}, 1}, {{0}, 2}, {{-2}, 1}, {{-4}, 1}});
  const auto none = kernel(delta_constrained(DualVector{{1, 0, 0}}, g, 1), 3);
  CHECK(weight_decomposition(g, none).weights.empty());
}

TEST_CASE("Sym^k weights agree with the Newton oracle") {
  for (const char* label : {"A1", "A2", "G2", "B3"}) {
    CAPTURE(label);
    const auto g = make_algebra(label);
    for (int k = 1; k <= 3; ++k) CHECK(sym_power_weights(g, k) == sym_power_by_newton(g, k));
  }
}

TEST_CASE("A1 h* kernel weights and decomposition are locked") {
  std::ifstream in(std::string(GOLDEN_DIR) + "/a1_hstar_k2_weights.json");
  const auto gold = nlohmann::json::parse(in);
  const auto g = make_algebra("A1");
  const auto kb = kernel(delta_constrained(DualVector{{1, 0, 0}}, g, 2), 3);
  const auto wd = weight_decomposition(g, kb);
  CHECK(wd.cartan_stable);
  WeightMultiset want;
  for (const auto& row : gold["kernel_weights"]) want[{row["weight"].get<int>()}] = row["multiplicity"].get<int>();
  CHECK(wd.weights == want);
  if (gold["decomposition"]["decomposes"].get<bool>()) {
    std::vector<long> dims;
    for (const auto& s : gold["decomposition"]["dims"]) dims.push_back(std::stol(s.get<std::string>()));
    CHECK(dims_of(decompose_character(wd.weights, g)) == dims);
  } else {
    CHECK_THROWS_AS(decompose_character(wd.weights, g), CharacterError);
  }
}

TEST_CASE("Weyl dimension") {
  const auto e7 = make_algebra("E7");
  CHECK(weyl_dim({0, 0, 0, 0, 0, 0, 1}, e7) == 56);
  CHECK(weyl_dim({1, 0, 0, 0, 0, 0, 0}, e7) == 133);
  CHECK(weyl_dim({0, 0, 0, 0, 0, 0, 0}, e7) == 1);
  const auto a1 = make_algebra("A1");
  CHECK(weyl_dim({2}, a1) == 3);
  for (int m = 0; m < 10; ++m) CHECK(weyl_dim({m}, a1) == m + 1);
  CHECK(weyl_dim({1, 0}, make_algebra("G2")) == 7);
  CHECK(weyl_dim({0, 1}, make_algebra("G2")) == 14);
  CHECK(weyl_dim({0, 0, 0, 1}, make_algebra("F4")) == 26);
  CHECK(weyl_dim({0, 0, 0, 0, 0, 0, 0, 1}, make_algebra("E8")) == 248);
  CHECK_THROWS_AS(weyl_dim({-1}, a1), UsageError);
}

TEST_CASE("character peeling") {
  const auto a1 = make_algebra("A1");
  const auto adj = decompose_character({{{2}, 1}, {{0}, 1}, {{-2}, 1}}, a1);
  REQUIRE(adj.size() == 1);
  CHECK(adj[0].highest_weight == Weight{2});
  CHECK(adj[0].dim == 3);
  CHECK(decompose_character({}, a1).empty());
  CHECK(dims_of(decompose_character(sym_power_weights(a1, 2), a1)) == std::vector<long>{5, 1});
  CHECK(dims_of(decompose_character(sym_power_weights(make_algebra("G2"), 2), make_algebra("G2"))) ==
        std::vector<long>{77, 27, 1});
  CHECK_THROWS_AS(decompose_character({{{2}, 1}}, a1), CharacterError);
  CHECK_THROWS_AS(decompose_character({{{4}, 1}, {{0}, 1}, {{-4}, 1}}, a1),
                  CharacterError);
}
