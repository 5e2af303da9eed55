// Regenerates the C++-side golden fixtures. Not part of the test run; invoke by
// hand after a deliberate change and review the diff.
//   freeze_goldens <golden dir> [--skip-e7]

#include "oracle_dense.hpp"

#include "discrete_spencer.hpp"
#include "kernel_lab.hpp"
#include "rep_decomp.hpp"
#include "spencer_ops.hpp"
#include "var_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <string>

using namespace spencer;
using Json = nlohmann::ordered_json;

namespace {

std::vector<oracle::Q> lambda_of(const LieAlgebra& g, const std::string& spec) {
  return lambda_from_spec(g, spec).coefficients;
}

std::string qstr(const oracle::Q& q) { return q.get_str(); }

Json composite_summary(const oracle::Dense& c) {
  std::uint64_t nnz = 0;
  oracle::Q mx = 0;
  for (const auto& row : c)
    for (const auto& x : row)
      if (x != 0) {
        ++nnz;
        mx = std::max<oracle::Q>(mx, abs(x));
      }
  return Json{{"rows", c.size()}, {"cols", c.empty() ? 0 : c[0].size()}, {"nnz", nnz},
              {"rank", oracle::rank(c)}, {"max_abs_entry", qstr(mx)}, {"is_zero", nnz == 0}};
}

void write(const std::string& dir, const std::string& name, const Json& j) {
  std::ofstream out(dir + "/" + name);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << name << "\n";
}

Json a2_nilpotency() {
  const auto g = make_algebra("A2");
  const auto d = oracle::densify(g);
  Json out{{"algebra", "A2"}, {"audits", Json::array()}};
  for (std::string spec : {"random:11", "preset:zero", "preset:cartan1"}) {
    const auto images = oracle::constrained_images(d, lambda_of(g, spec));
    for (int k = 1; k <= 2; ++k) {
      const auto first = oracle::operator_matrix(images, 8, k, true);
      const auto second = oracle::operator_matrix(images, 8, k + 1, true);
      Json row = composite_summary(oracle::product(second, first));
      row["lambda"] = spec;
      row["k"] = k;
      out["audits"].push_back(row);
    }
  }
  return out;
}

Json a2_kernels() {
  const auto g = make_algebra("A2");
  const auto d = oracle::densify(g);
  const std::string spec = "random:11";
  const auto images = oracle::constrained_images(d, lambda_of(g, spec));
  Json out{{"algebra", "A2"}, {"lambda", spec}, {"kernel_dims", Json::object()}};
  for (int k = 1; k <= 3; ++k) {
    const auto m = oracle::operator_matrix(images, 8, k, true);
    out["kernel_dims"][std::to_string(k)] = oracle::nullspace(m, m[0].size()).size();
  }
  // exhaustive membership: ad_{b_x} v in span(K) for every basis x and kernel vector v
  const auto m = oracle::operator_matrix(images, 8, 2, true);
  const auto basis = oracle::monomials(8, 2);
  const auto kvecs = oracle::nullspace(m, basis.size());
  std::uint64_t violations = 0, checked = 0;
  for (std::size_t x = 0; x < d.n; ++x)
    for (const auto& v : kvecs) {
      oracle::Dense stack(kvecs.begin(), kvecs.end());
      stack.push_back(oracle::to_coords(oracle::ad_on_poly(d, x, oracle::to_poly(v, basis)), basis));
      ++checked;
      if (oracle::rank(stack) > kvecs.size()) ++violations;
    }
  out["submodule"] = {{"k", 2}, {"checked", checked}, {"violations", violations}, {"holds", violations == 0}};
  return out;
}

Json a1_weights() {
  // Cartan eigenvalues read off monomials; the h* operator preserves weight so the
  // kernel splits over weight spaces.
  const auto g = make_algebra("A1");
  const auto d = oracle::densify(g);
  const auto images = oracle::constrained_images(d, lambda_of(g, "preset:cartan1"));
  const auto basis = oracle::monomials(3, 2);
  auto weight = [&](const oracle::Mono& mono) {
    int w = 0;
    for (int i : mono) w += i == 1 ? 2 : (i == 2 ? -2 : 0);
    return w;
  };
  const auto m = oracle::operator_matrix(images, 3, 2, true);
  std::map<int, std::uint64_t> dims;
  for (int w = -4; w <= 4; w += 2) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (weight(basis[j]) == w) cols.push_back(j);
    if (cols.empty()) continue;
    oracle::Dense sub = oracle::zeros(m.size(), cols.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t c = 0; c < cols.size(); ++c) sub[i][c] = m[i][cols[c]];
    const auto kd = oracle::nullspace(sub, cols.size()).size();
    if (kd) dims[w] = kd;
  }
  Json weights = Json::array();
  for (const auto& [w, c] : dims) weights.push_back({{"weight", w}, {"multiplicity", c}});
  WeightMultiset ms;
  for (const auto& [w, c] : dims) ms[{w}] = static_cast<std::int64_t>(c);
  Json verdict;
  try {
    Json summands = Json::array();
    for (const auto& s : decompose_character(ms, g)) summands.push_back(s.dim.get_str());
    verdict = {{"decomposes", true}, {"dims", summands}};
  } catch (const CharacterError&) {
    verdict = {{"decomposes", false}};
  }
  return Json{{"algebra", "A1"}, {"lambda", "preset:cartan1"}, {"k", 2}, {"kernel_weights", weights},
              {"decomposition", verdict}};
}

Json noncommuting() {
  // alpha random scalar 0-cochain on T^2 (N=4, seed 5), s = h, lam = h*: algebra part alpha (x) delta(h)
  const auto g = make_algebra("A1");
  const auto d = oracle::densify(g);
  const auto images = oracle::constrained_images(d, lambda_of(g, "preset:cartan1"));
  CubicalTorus torus(2, 4);
  std::mt19937_64 rng(5);
  const auto alpha = random_scalar_cochain(torus, 0, rng);
  std::uint64_t cells = 0;
  oracle::Q total = 0;
  for (const auto& [cell, a] : alpha) {
    if (a == 0) continue;
    ++cells;
    for (const auto& [mono, c] : images[0]) total += a * c;
  }
  return Json{{"algebra", "A1"}, {"lambda", "preset:cartan1"}, {"torus", 2}, {"n", 4}, {"seed", 5},
              {"s", "h"}, {"nonzero_cells", cells}, {"coefficient_sum", qstr(total)}};
}

Json energy_golden() {
  VarsolveConfig c;
  c.d = 2;
  c.n = 4;
  c.algebra = "A1";
  c.seed = 7;
  auto g = std::make_shared<const LieAlgebra>(make_algebra("A1"));
  const auto d = oracle::densify(*g);
  const auto b = random_bundle(c, g);
  const auto f = random_field(b, c.seed, c.init_lambda);
  const double e = oracle::lattice_energy(d, 2, 4, b.omega, f, c.weights.alpha1, c.weights.alpha3, c.weights.bound);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", e);
  return Json{{"config", varsolve_config_to_json(c)}, {"energy", std::stod(buf)}, {"energy_text", buf}};
}

Json e7_measurement() {
  const auto g = make_algebra("E7");
  const auto mat = delta_constrained(lambda_from_spec(g, "preset:cartan1"), g, 2);
  const auto kb = kernel(mat, g.dim());
  return Json{{"algebra", "E7"},
              {"lambda", "preset:cartan1"},
              {"k", 2},
              {"rows", mat.entries.rows},
              {"cols", mat.entries.cols},
              {"nnz", mat.entries.nnz()},
              {"rank", kb.rank},
              {"kernel_dim", kb.dim()},
              {"blocks", kb.certificate.blocks},
              {"predicted", 56}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: freeze_goldens <dir> [--skip-e7]\n";
    return 2;
  }
  const std::string dir = argv[1];
  const bool skip_e7 = argc > 2 && std::string(argv[2]) == "--skip-e7";
  write(dir, "a2_nilpotency.json", a2_nilpotency());
  write(dir, "a2_random11.json", a2_kernels());
  write(dir, "a1_hstar_k2_weights.json", a1_weights());
  write(dir, "t2_noncommuting.json", noncommuting());
  write(dir, "varsolve_energy.json", energy_golden());
  if (!skip_e7) write(dir, "e7_k2_cartan1.json", e7_measurement());
  return 0;
}
