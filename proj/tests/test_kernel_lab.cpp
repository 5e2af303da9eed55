#include "doctest.h"

#include "errors.hpp"
#include "kernel_lab.hpp"
#include "oracle_dense.hpp"

#include <fstream>

using namespace spencer;

namespace {

nlohmann::json golden(const std::string& name) {
  std::ifstream in(std::string(GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

std::vector<SparseVector> sparse_rows(const std::vector<std::vector<oracle::Q>>& dense) {
  std::vector<SparseVector> out;
  for (const auto& v : dense) {
    SparseVector s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) s.emplace_back(static_cast<std::uint32_t>(i), v[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("zero lambda: kernel is all of Sym^k") {
  for (const char* label : {"A1", "A2", "G2"}) {
    const auto g = make_algebra(label);
    for (int k = 1; k <= 3; ++k) {
      const auto kb = kernel(delta_constrained(DualVector::zero(g.dim()), g, k), g.dim());
      CHECK(kb.dim() == sym_dim(g.dim(), k));
      CHECK(kb.rank == 0);
    }
  }
}

TEST_CASE("A1 h* kernels agree with the sl2 oracle golden") {
  const auto gold = golden("a1_hstar_audit.json");
  const auto g = make_algebra("A1");
  for (int k = 1; k <= 3; ++k) {
    const auto mat = delta_constrained(DualVector{{1, 0, 0}}, g, k);
    const auto kb = kernel(mat, 3);
    CHECK(kb.dim() == gold["kernel_dims"][std::to_string(k)].get<std::uint64_t>());
    CHECK(verify_kernel(mat, kb));
  }
}

TEST_CASE("A2 random kernels agree with the dense golden and the dense oracle") {
  const auto gold = golden("a2_random11.json");
  const auto g = make_algebra("A2");
  const auto lam = lambda_from_spec(g, gold["lambda"].get<std::string>());
  const auto d = oracle::densify(g);
  const auto images = oracle::constrained_images(d, lam.coefficients);
  for (int k = 1; k <= 3; ++k) {
    const auto mat = delta_constrained(lam, g, k);
    const auto kb = kernel(mat, 8);
    CHECK(kb.dim() == gold["kernel_dims"][std::to_string(k)].get<std::uint64_t>());
    const auto dense = oracle::nullspace(oracle::operator_matrix(images, 8, k, true), kb.source_dim);
    CHECK(same_span(kb.vectors, sparse_rows(dense), kb.source_dim));
  }
}

TEST_CASE("mirror stability of kernels") {
  const auto a1 = make_algebra("A1");
  for (int k = 1; k <= 2; ++k) {
    CHECK(mirror_stability_check(DualVector{{1, 0, 0}}, a1, k).holds);
    CHECK(mirror_stability_check(DualVector::zero(3), a1, k).holds);
  }
  const auto a2 = make_algebra("A2");
  const auto ms = mirror_stability_check(lambda_from_spec(a2, "random:11"), a2, 2);
  CHECK(ms.holds);
  CHECK(ms.dim_plus == ms.joint_rank);
}

TEST_CASE("kernel element round trip") {
  const auto g = make_algebra("A1");
  const auto kb = kernel(delta_constrained(DualVector{{1, 0, 0}}, g, 2), 3);
  const auto op = SpencerOperator::constrained(g, DualVector{{1, 0, 0}});
  for (std::size_t i = 0; i < kb.dim(); ++i) CHECK(op.apply(kb.element(i)).is_zero());
}

TEST_CASE("minimal irrep table") {
  CHECK(min_irrep_dim('G', 2) == 7);
  CHECK(min_irrep_dim('F', 4) == 26);
  CHECK(min_irrep_dim('E', 6) == 27);
  CHECK(min_irrep_dim('E', 7) == 56);
  CHECK(min_irrep_dim('E', 8) == 248);
  CHECK(min_irrep_dim('A', 1) == 2);
  CHECK(min_irrep_dim('B', 2) == 4);
  CHECK(min_irrep_dim('B', 3) == 7);
  CHECK(min_irrep_dim('C', 3) == 6);
  CHECK(min_irrep_dim('D', 4) == 8);
  CHECK_FALSE(min_irrep_is_extension('E', 7));
  CHECK(min_irrep_is_extension('E', 6));
  CHECK(min_irrep_is_extension('A', 3));
  CHECK_THROWS_AS(min_irrep_dim('Q', 2), UsageError);
  CHECK_THROWS_AS(min_irrep_dim('G', 3), UsageError);
}

TEST_CASE("tension verdicts") {
  auto e7 = tension_report(parse_algebra_label("E7"), 56);
  CHECK(e7.lower_bound == 56);
  CHECK(e7.upper_bound == 56);
  CHECK(e7.verdict == TensionVerdict::forced_match);
  CHECK(e7.forced_dim == 56);
  CHECK(tension_report(parse_algebra_label("E8"), 56).verdict == TensionVerdict::infeasible);
  const auto g2 = tension_report(parse_algebra_label("G2"), 100);
  CHECK(g2.verdict == TensionVerdict::unconstrained);
  CHECK(g2.lower_bound == 7);
  CHECK(tension_report(parse_algebra_label("F4"), 10).verdict == TensionVerdict::infeasible);
  CHECK(tension_report(parse_algebra_label("E7"), 56, 135).consistent == false);
  CHECK(tension_report(parse_algebra_label("E7"), 56, 56).consistent == true);
  CHECK_THROWS_AS(tension_report(parse_algebra_label("E7"), -1), UsageError);
}

TEST_CASE("E7 measurement is locked") {
  const auto gold = golden("e7_k2_cartan1.json");
  const auto g = make_algebra("E7");
  const auto mat = delta_constrained(lambda_from_spec(g, "preset:cartan1"), g, 2);
  CHECK(mat.entries.rows == gold["rows"].get<std::uint64_t>());
  CHECK(mat.entries.cols == gold["cols"].get<std::uint64_t>());
  CHECK(mat.entries.nnz() == gold["nnz"].get<std::uint64_t>());
  const auto kb = kernel(mat, g.dim());
  CHECK(kb.dim() == gold["kernel_dim"].get<std::uint64_t>());
  CHECK(kb.rank == gold["rank"].get<std::uint64_t>());
  CHECK(kb.certificate.primes_used.size() >= 3);
  CHECK(kb.certificate.exact_confirmed);
  CHECK(verify_kernel(mat, kb));
}
