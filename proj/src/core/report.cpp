#include "report.hpp"

#include "errors.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace spencer::report {

int killing_determinant_sign(const LieAlgebra& algebra) {
  const auto& k = algebra.killing_form();
  const std::size_t n = algebra.dim();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (k[i][j] != 0) parent[find(i)] = find(j);
  std::map<std::size_t, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) blocks[find(i)].push_back(i);
  int sign = 1;
  for (const auto& [root, idx] : blocks) {
    const std::size_t m = idx.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) a[r][c] = k[idx[r]][idx[c]];
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t p = c;
      while (p < m && a[p][c] == 0) ++p;
      if (p == m) return 0;
      if (p != c) {
        std::swap(a[p], a[c]);
        sign = -sign;
      }
      if (a[c][c] < 0) sign = -sign;
      for (std::size_t r = c + 1; r < m; ++r) {
        if (a[r][c] == 0) continue;
        const Rational f = a[r][c] / a[c][c];
        for (std::size_t t = c; t < m; ++t) a[r][t] -= f * a[c][t];
      }
    }
  }
  return sign;
}

Json rational(const Rational& q) { return to_string(q); }

Json sparse_vector(const SparseVector& v) {
  Json out = Json::array();
  for (const auto& [i, x] : v) out.push_back(Json::array({i, to_string(x)}));
  return out;
}

Json certificate(const RankCertificate& c) {
  return Json{{"primes_used", c.primes_used},
              {"modular_ranks", c.modular_ranks},
              {"exact_confirmed", c.exact_confirmed},
              {"method", c.method},
              {"attempts", c.attempts},
              {"blocks", c.blocks},
              {"reconstruction_primes", c.reconstruction_primes}};
}

namespace {

Json dual_vector(const DualVector& lam) {
  Json out = Json::array();
  for (const auto& x : lam.coefficients) out.push_back(to_string(x));
  return out;
}

std::optional<int> exceptional_min_irrep(const LieAlgebra& algebra) {
  if (!algebra.roots()) return std::nullopt;
  const auto& d = algebra.roots()->datum;
  if (d.family == 'E' || d.family == 'F' || d.family == 'G') return min_irrep_dim(d.family, d.rank);
  return std::nullopt;
}

}  // namespace

Json lie_info(const LieAlgebra& algebra) {
  Json out;
  out["algebra"] = algebra.label();
  if (algebra.roots()) {
    const auto& rs = *algebra.roots();
    out["family"] = std::string(1, rs.datum.family);
    out["rank"] = rs.rank();
    out["cartan_matrix"] = rs.datum.cartan_matrix;
    out["positive_roots"] = rs.positive_roots.size();
    out["root_count"] = 2 * rs.positive_roots.size();
  }
  out["dim"] = algebra.dim();
  out["killing_determinant_sign"] = killing_determinant_sign(algebra);
  const auto violation = algebra.find_jacobi_violation();
  out["jacobi_holds"] = !violation.has_value();
  if (violation) out["jacobi_violation"] = *violation;
  out["antisymmetric"] = algebra.is_antisymmetric();
  out["integral_structure_constants"] = algebra.integral();
  if (algebra.roots()) {
    const auto& d = algebra.roots()->datum;
    try {
      out["min_irrep_dim"] = min_irrep_dim(d.family, d.rank);
      out["min_irrep_source"] = min_irrep_is_extension(d.family, d.rank) ? "standard table (extension)" : "exceptional table";
    } catch (const UsageError&) {
    }
  }
  return out;
}

Json matrix(const SpencerMatrix& m, const std::string& lambda_spec, bool include_entries) {
  Json out;
  out["variant"] = to_string(m.variant);
  out["lambda_spec"] = m.lambda ? Json(lambda_spec) : Json(nullptr);
  out["lambda"] = m.lambda ? dual_vector(*m.lambda) : Json(nullptr);
  out["k_from"] = m.k_from;
  out["k_to"] = m.k_to;
  out["rows"] = m.entries.rows;
  out["cols"] = m.entries.cols;
  out["nnz"] = m.entries.nnz();
  out["max_abs_entry"] = rational(m.entries.max_abs_entry());
  if (include_entries) {
    Json entries = Json::array();
    for (std::size_t j = 0; j < m.entries.columns.size(); ++j)
      for (const auto& [i, x] : m.entries.columns[j]) entries.push_back(Json::array({i, j, to_string(x)}));
    out["entries"] = std::move(entries);
  }
  return out;
}

Json module_analysis(const LieAlgebra& algebra, const KernelBasis& kb) {
  Json out;
  const auto sub = is_g_submodule(algebra, kb);
  out["is_submodule"] = sub.holds;
  out["pairs_checked"] = sub.checked;
  out["violation_count"] = sub.violation_count;
  Json viol = Json::array();
  for (const auto& [x, i] : sub.violations) viol.push_back(Json{{"generator", algebra.basis_labels()[x]}, {"kernel_vector", i}});
  out["violations"] = std::move(viol);
  const auto wd = weight_decomposition(algebra, kb);
  out["cartan_stable"] = wd.cartan_stable;
  Json weights = Json::array();
  for (const auto& [w, m] : wd.weights) weights.push_back(Json{{"weight", w}, {"multiplicity", m}});
  out["weights"] = std::move(weights);
  out["advisory"] = !sub.holds;
  try {
    Json summands = Json::array();
    for (const auto& s : decompose_character(wd.weights, algebra))
      summands.push_back(Json{{"highest_weight", s.highest_weight}, {"dim", s.dim.get_str()}, {"multiplicity", s.multiplicity}});
    out["decomposition"] = std::move(summands);
  } catch (const CharacterError& e) {
    out["decomposition"] = nullptr;
    out["decomposition_error"] = e.what();
  }
  return out;
}

Json kernel(const LieAlgebra& algebra, const KernelBasis& kb, const std::string& lambda_spec, const KernelOptions& opts) {
  Json out;
  out["algebra"] = algebra.label();
  out["lambda_spec"] = lambda_spec;
  out["k"] = kb.k;
  out["source_dim"] = kb.source_dim;
  out["target_dim"] = sym_dim(kb.ambient_dim, kb.k + 1);
  out["rank"] = kb.rank;
  out["kernel_dim"] = kb.dim();
  out["certificate"] = certificate(kb.certificate);
  if (auto m = exceptional_min_irrep(algebra); m && kb.k == 2) {
    out["framework_prediction"] = Json{{"value", *m},
                                       {"assumes_h11", *m},
                                       {"measured", kb.dim()},
                                       {"agrees", kb.dim() == static_cast<std::uint64_t>(*m)}};
  }
  if (opts.module_analysis) out["module"] = module_analysis(algebra, kb);
  if (opts.include_basis) {
    Json basis = Json::array();
    for (const auto& v : kb.vectors) basis.push_back(sparse_vector(v));
    out["free_columns"] = kb.free_columns;
    out["basis"] = std::move(basis);
  }
  return out;
}

VerifyOutcome verify(const LieAlgebra& algebra, const std::string& lambda_spec, int k_min, int k_max,
                     const AssemblyOptions& assembly, const EliminationOptions& elim) {
  if (k_min < 1 || k_max < k_min) throw UsageError("invalid degree range");
  const auto lam = lambda_from_spec(algebra, lambda_spec);
  VerifyOutcome res;
  Json mirror = Json::array(), stability = Json::array(), nilpotency = Json::array();
  for (int k = k_min; k <= k_max; ++k) {
    const auto mr = verify_mirror(lam, algebra, k, assembly);
    mirror.push_back(Json{{"k", k},
                          {"holds", mr.holds},
                          {"rows", mr.rows},
                          {"cols", mr.cols},
                          {"max_abs_sum", rational(mr.max_abs_sum)},
                          {"max_abs_operator", rational(mr.max_abs_operator)}});
    const auto ms = mirror_stability_check(lam, algebra, k, assembly, elim);
    stability.push_back(Json{{"k", k},
                             {"holds", ms.holds},
                             {"dim_plus", ms.dim_plus},
                             {"dim_minus", ms.dim_minus},
                             {"joint_rank", ms.joint_rank}});
    res.identities_hold = res.identities_hold && mr.holds && ms.holds;
    NilpotencyReport na;
    try {
      na = nilpotency_audit(lam, algebra, k, assembly, elim);
    } catch (const ResourceCapError& e) {
      nilpotency.push_back(Json{{"k", k}, {"status", "skipped"}, {"reason", e.what()}});
      continue;
    }
    nilpotency.push_back(Json{{"k", k},
                              {"status", "measured"},
                              {"rows", na.rows},
                              {"cols", na.cols},
                              {"nnz", na.nnz},
                              {"rank", na.rank},
                              {"max_abs_entry", rational(na.max_abs_entry)},
                              {"is_zero", na.is_zero}});
  }
  res.body["algebra"] = algebra.label();
  res.body["lambda_spec"] = lambda_spec;
  res.body["lambda"] = dual_vector(lam);
  res.body["k_range"] = Json::array({k_min, k_max});
  res.body["mirror_antisymmetry"] = std::move(mirror);
  res.body["kernel_mirror_stability"] = std::move(stability);
  res.body["nilpotency"] = std::move(nilpotency);
  res.body["nilpotency_gates_exit"] = false;
  res.body["identities_hold"] = res.identities_hold;
  return res;
}

Json cohomology(const LieAlgebra& algebra, const std::string& lambda_spec, int k, int torus_dim, int n,
                const AssemblyOptions& assembly, const EliminationOptions& elim) {
  const auto lam = lambda_from_spec(algebra, lambda_spec);
  const auto op = SpencerOperator::constrained(algebra, lam);
  const CubicalTorus torus(torus_dim, n);
  const SpencerMatrix mat{SpencerVariant::constrained, lam, k, k + 1, op.matrix(k, assembly)};
  const auto kb = spencer::kernel(mat, algebra.dim(), elim);
  const auto rep = degenerate_cohomology(torus, op, kb, elim);

  Json phi = Json::array();
  bool surjective = true, boundaries_ok = true;
  std::mt19937_64 rng(elim.seed);
  for (int p = 0; p <= torus_dim; ++p) {
    const std::size_t nsub = torus.subsets(p).size();
    std::vector<SparseVector> images;
    for (std::size_t t = 0; t < nsub; ++t)
      for (std::size_t j = 0; j < kb.dim(); ++j) {
        const auto classes = phi_deg_all(torus, op, kb, tensor(p, axis_cocycle(torus, p, t), kb.element(j)));
        SparseVector v;
        for (std::size_t c = 0; c < classes.size(); ++c)
          for (std::size_t s = 0; s < nsub; ++s)
            if (classes[c].coordinates[s] != 0)
              v.emplace_back(static_cast<std::uint32_t>(c * nsub + s), classes[c].coordinates[s]);
        images.push_back(std::move(v));
      }
    const auto rank = span_rank(images, std::max<std::size_t>(1, kb.dim() * nsub));
    const bool full = rank == rep.betti[p] * kb.dim();
    surjective = surjective && full;
    bool boundary_zero = true;
    if (p > 0 && kb.dim() > 0) {
      const auto beta = random_scalar_cochain(torus, p - 1, rng);
      const auto exact = coboundary(torus, tensor(p - 1, beta, kb.element(0)));
      for (const auto& cls : phi_deg_all(torus, op, kb, exact)) boundary_zero = boundary_zero && cls.is_zero();
    }
    boundaries_ok = boundaries_ok && boundary_zero;
    phi.push_back(Json{{"p", p}, {"rank", rank}, {"expected", rep.betti[p] * kb.dim()}, {"full_rank", full},
                       {"boundary_maps_to_zero", boundary_zero}});
  }

  Json out;
  out["algebra"] = algebra.label();
  out["lambda_spec"] = lambda_spec;
  out["k"] = k;
  out["torus"] = Json{{"d", torus_dim}, {"N", n}};
  out["kernel_dim"] = rep.kernel_dim;
  out["kernel_certificate"] = certificate(kb.certificate);
  out["de_rham"] = Json{{"cell_counts", rep.cell_counts},
                        {"coboundary_ranks", rep.coboundary_ranks},
                        {"betti", rep.betti},
                        {"euler_characteristic", euler_characteristic(rep.betti)}};
  out["degenerate"] = Json{{"ranks", rep.degenerate_ranks},
                           {"dims", rep.degenerate_dims},
                           {"euler_characteristic", euler_characteristic(rep)}};
  out["product_identity_holds"] = rep.product_identity_holds;
  out["degeneration_holds"] = rep.degeneration_holds;
  out["degeneration_samples"] = rep.degeneration_samples;
  out["phi_deg"] = Json{{"per_degree", std::move(phi)}, {"surjective", surjective}, {"well_defined", boundaries_ok}};
  return out;
}

Json tension(const TensionReport& r) {
  Json out;
  out["algebra"] = r.algebra;
  out["h11"] = r.h11;
  out["min_irrep_dim"] = r.min_irrep;
  out["lower_bound"] = r.lower_bound;
  out["lower_bound_source"] = "smallest nontrivial irreducible representation; applies only to a nonzero kernel";
  out["upper_bound"] = r.upper_bound;
  out["upper_bound_source"] = "h11 is an input parameter, not computed from the algebra";
  out["verdict"] = to_string(r.verdict);
  out["forced_dim"] = r.forced_dim ? Json(*r.forced_dim) : Json(nullptr);
  out["zero_kernel_allowed"] = true;
  out["kernel_dim_measured"] = r.kernel_dim_measured ? Json(*r.kernel_dim_measured) : Json(nullptr);
  out["consistent"] = r.consistent ? Json(*r.consistent) : Json(nullptr);
  return out;
}

Json varsolve(const VarsolveConfig& config, std::ostream* csv) {
  auto algebra = std::make_shared<const LieAlgebra>(make_algebra(config.algebra));
  const auto bundle = random_bundle(config, algebra);
  const auto start = random_field(bundle, config.seed, config.init_lambda);
  const auto result = minimize(bundle, start, config.weights, config.solver);
  if (csv) write_trace_csv(*csv, result.trace);
  bool monotone = true;
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    monotone = monotone && result.trace[i].energy.total <= result.trace[i - 1].energy.total;
  const auto cert = certify_compatible_pair(bundle, result.config, config.solver.tol);
  double max_pair = 0;
  for (const auto& n : cert.nodes) max_pair = std::max(max_pair, n.max_pairing_on_d);
  auto breakdown = [](const EnergyBreakdown& e) {
    return Json{{"main", e.main}, {"pen1", e.pen1}, {"pen3", e.pen3}, {"total", e.total}};
  };
  Json out;
  out["functional"] = "real discrete modified-Cartan residual with compatibility and boundedness penalties";
  out["config"] = varsolve_config_to_json(config);
  out["alpha2_used"] = false;
  out["status"] = result.status;
  out["iterations"] = result.trace.back().iter;
  out["initial_energy"] = breakdown(result.trace.front().energy);
  out["final_energy"] = breakdown(result.trace.back().energy);
  out["final_grad_norm"] = result.trace.back().grad_norm;
  out["trace_monotone"] = monotone;
  out["cartan_residual_start"] = cartan_residual(bundle, start);
  out["cartan_residual_final"] = cartan_residual(bundle, result.config);
  out["certificate"] = Json{{"tol", cert.tol},
                            {"nodes", cert.nodes.size()},
                            {"degenerate_nodes", cert.degenerate_nodes},
                            {"transversal_nodes", cert.transversal_nodes},
                            {"d_edges", cert.d_edges},
                            {"max_pairing_on_d", max_pair}};
  return out;
}

}  // namespace spencer::report
