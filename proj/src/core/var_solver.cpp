#include "var_solver.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace spencer {

Lattice::Lattice(int d, int n) : d_(d), n_(n) {
  if (d < 1 || d > 4) throw UsageError("lattice dimension must be in 1..4");
  if (n < 2 || n > 64) throw UsageError("lattice size must be in 2..64");
  for (int i = 0; i < d; ++i) nodes_ *= static_cast<std::size_t>(n);
}

std::vector<int> Lattice::coords(std::size_t node) const {
  std::vector<int> x(d_);
  for (int i = 0; i < d_; ++i) {
    x[i] = static_cast<int>(node % n_);
    node /= n_;
  }
  return x;
}

std::size_t Lattice::node(const std::vector<int>& x) const {
  std::size_t v = 0;
  for (int i = d_ - 1; i >= 0; --i) v = v * n_ + static_cast<std::size_t>(((x[i] % n_) + n_) % n_);
  return v;
}

std::size_t Lattice::neighbor(std::size_t v, int axis, int step) const {
  auto x = coords(v);
  x[axis] += step;
  return node(x);
}

RealStructure::RealStructure(const LieAlgebra& algebra) : dim(algebra.dim()), table(dim * dim) {
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t j = 0; j < dim; ++j)
      for (const auto& [m, c] : algebra.bracket(x, j)) table[x * dim + j].emplace_back(m, c.get_d());
}

LatticeBundle::LatticeBundle(Lattice l, std::shared_ptr<const LieAlgebra> g)
    : lattice(l), algebra(std::move(g)), structure(std::make_shared<RealStructure>(*algebra)),
      omega(lattice.edges(), std::vector<double>(algebra->dim(), 0.0)) {}

std::vector<double> coadjoint(const RealStructure& s, const std::vector<double>& w, const std::vector<double>& lam) {
  std::vector<double> out(s.dim, 0.0);
  for (std::size_t x = 0; x < s.dim; ++x) {
    if (w[x] == 0) continue;
    for (std::size_t j = 0; j < s.dim; ++j)
      for (const auto& [m, c] : s.table[x * s.dim + j]) out[j] -= w[x] * c * lam[m];
  }
  return out;
}

namespace {

/// (A - I)^T r with A_{jm} = -sum_x w_x c^m_{xj}.
std::vector<double> tail_adjoint(const RealStructure& s, const std::vector<double>& w, const std::vector<double>& r) {
  std::vector<double> out(s.dim, 0.0);
  for (std::size_t m = 0; m < s.dim; ++m) out[m] = -r[m];
  for (std::size_t x = 0; x < s.dim; ++x) {
    if (w[x] == 0) continue;
    for (std::size_t j = 0; j < s.dim; ++j)
      for (const auto& [m, c] : s.table[x * s.dim + j]) out[m] -= w[x] * c * r[j];
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Argmax {
  std::size_t node = 0, coord = 0;
  double value = -1;
};

Argmax sup_norm_sq(const FieldConfig& f) {
  Argmax a;
  for (std::size_t v = 0; v < f.size(); ++v)
    for (std::size_t i = 0; i < f[v].size(); ++i)
      if (f[v][i] * f[v][i] > a.value) a = Argmax{v, i, f[v][i] * f[v][i]};
  if (a.value < 0) a.value = 0;
  return a;
}

void check_config(const LatticeBundle& b, const FieldConfig& f) {
  if (f.size() != b.lattice.nodes()) throw UsageError("field has wrong node count");
  for (const auto& v : f)
    if (v.size() != b.algebra_dim()) throw UsageError("field value has wrong length");
}

}  // namespace

std::vector<double> edge_residual(const LatticeBundle& b, const FieldConfig& f, std::size_t edge) {
  const std::size_t tail = edge / b.lattice.dim();
  const int axis = static_cast<int>(edge % b.lattice.dim());
  const std::size_t head = b.lattice.neighbor(tail, axis);
  auto r = coadjoint(*b.structure, b.omega[edge], f[tail]);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += f[head][i] - f[tail][i];
  return r;
}

EnergyBreakdown energy(const LatticeBundle& b, const FieldConfig& f, const Weights& w) {
  check_config(b, f);
  EnergyBreakdown e;
  e.weights = w;
  for (std::size_t edge = 0; edge < b.lattice.edges(); ++edge) {
    const auto r = edge_residual(b, f, edge);
    e.main += dot(r, r);
    const double pair = dot(f[edge / b.lattice.dim()], b.omega[edge]);
    e.pen1 += pair * pair;
  }
  e.pen3 = std::max(0.0, sup_norm_sq(f).value - w.bound);
  e.total = e.main + w.alpha1 * e.pen1 + w.alpha3 * e.pen3;
  return e;
}

FieldConfig gradient(const LatticeBundle& b, const FieldConfig& f, const Weights& w) {
  check_config(b, f);
  const std::size_t n = b.algebra_dim();
  FieldConfig g(f.size(), std::vector<double>(n, 0.0));
  for (std::size_t edge = 0; edge < b.lattice.edges(); ++edge) {
    const std::size_t tail = edge / b.lattice.dim();
    const std::size_t head = b.lattice.neighbor(tail, static_cast<int>(edge % b.lattice.dim()));
    const auto r = edge_residual(b, f, edge);
    const auto t = tail_adjoint(*b.structure, b.omega[edge], r);
    for (std::size_t i = 0; i < n; ++i) {
      g[head][i] += 2 * r[i];
      g[tail][i] += 2 * t[i];
    }
    const double pair = dot(f[tail], b.omega[edge]);
    for (std::size_t i = 0; i < n; ++i) g[tail][i] += w.alpha1 * 2 * pair * b.omega[edge][i];
  }
  const auto a = sup_norm_sq(f);
  if (a.value > w.bound) g[a.node][a.coord] += w.alpha3 * 2 * f[a.node][a.coord];
  return g;
}

double cartan_residual(const LatticeBundle& b, const FieldConfig& f) {
  check_config(b, f);
  double s = 0;
  for (std::size_t edge = 0; edge < b.lattice.edges(); ++edge) {
    const auto r = edge_residual(b, f, edge);
    s += dot(r, r);
  }
  return std::sqrt(s);
}

double cartan_residual(const LatticeBundle& b, const FieldConfig& f, const std::vector<std::size_t>& edges) {
  check_config(b, f);
  double s = 0;
  for (auto edge : edges) {
    const auto r = edge_residual(b, f, edge);
    s += dot(r, r);
  }
  return std::sqrt(s);
}

SolveResult minimize(const LatticeBundle& b, const FieldConfig& start, const Weights& w, const SolverConfig& cfg) {
  if (w.alpha1 < 0 || w.alpha3 < 0) throw UsageError("penalty weights must be nonnegative");
  if (!(cfg.step > 0) || cfg.max_iter < 0 || !(cfg.tol > 0)) throw UsageError("invalid solver configuration");
  SolveResult res;
  res.config = start;
  auto e = energy(b, res.config, w);
  auto g = gradient(b, res.config, w);
  auto norm = [](const FieldConfig& x) {
    double s = 0;
    for (const auto& v : x) s += dot(v, v);
    return std::sqrt(s);
  };
  double gn = norm(g);
  res.trace.push_back(TraceRow{0, e, gn, 0.0});
  double step = cfg.step;
  res.status = "max_iter";
  for (int it = 1; it <= cfg.max_iter; ++it) {
    if (gn < cfg.tol) {
      res.status = "converged";
      break;
    }
    bool accepted = false;
    FieldConfig trial;
    EnergyBreakdown te;
    double t = step;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt, t /= 2) {
      trial = res.config;
      for (std::size_t v = 0; v < trial.size(); ++v)
        for (std::size_t i = 0; i < trial[v].size(); ++i) trial[v][i] -= t * g[v][i];
      te = energy(b, trial, w);
      if (!std::isfinite(te.total)) continue;
      if (te.total <= e.total - 1e-4 * t * gn * gn) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = std::isfinite(te.total) ? "backtrack_exhausted" : "diverged";
      break;
    }
    res.config = std::move(trial);
    e = te;
    g = gradient(b, res.config, w);
    gn = norm(g);
    res.trace.push_back(TraceRow{it, e, gn, t});
    step = std::min(2 * t, cfg.step * 1024);
  }
  if (res.status == "max_iter" && gn < cfg.tol) res.status = "converged";
  return res;
}

std::vector<std::size_t> comb_tree(const Lattice& l) {
  std::vector<std::size_t> edges;
  for (std::size_t v = 0; v < l.nodes(); ++v) {
    const auto x = l.coords(v);
    for (int a = 0; a < l.dim(); ++a) {
      bool lower_zero = true;
      for (int c = 0; c < a; ++c) lower_zero = lower_zero && x[c] == 0;
      if (lower_zero && x[a] < l.size() - 1) edges.push_back(v * l.dim() + a);
    }
  }
  return edges;
}

FieldConfig covariantly_constant(const LatticeBundle& b, const std::vector<double>& seed) {
  if (seed.size() != b.algebra_dim()) throw UsageError("seed value has wrong length");
  const auto& l = b.lattice;
  FieldConfig f(l.nodes(), std::vector<double>(b.algebra_dim(), 0.0));
  std::vector<std::vector<std::size_t>> children(l.nodes());
  for (auto e : comb_tree(l)) children[e / l.dim()].push_back(e);
  std::vector<std::size_t> stack{0};
  f[0] = seed;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (auto e : children[v]) {
      const std::size_t head = l.neighbor(v, static_cast<int>(e % l.dim()));
      auto next = coadjoint(*b.structure, b.omega[e], f[v]);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = f[v][i] - next[i];
      f[head] = std::move(next);
      stack.push_back(head);
    }
  }
  return f;
}

CompatibilityCertificate certify_compatible_pair(const LatticeBundle& b, const FieldConfig& f, double tol) {
  check_config(b, f);
  CompatibilityCertificate cert;
  cert.tol = tol;
  const int d = b.lattice.dim();
  const int n = static_cast<int>(b.algebra_dim());
  for (std::size_t v = 0; v < f.size(); ++v) {
    NodeCertificate nc;
    nc.node = v;
    nc.rank_t = d + n;
    const double norm_sq = dot(f[v], f[v]);
    nc.degenerate = std::sqrt(norm_sq) <= tol;
    if (nc.degenerate) {
      ++cert.degenerate_nodes;
      cert.nodes.push_back(nc);
      continue;
    }
    // f restricted to T is nonzero on the vertical part, so ker f has codimension one
    nc.rank_d = d + n - 1;
    nc.rank_v = 1;
    nc.transversal = true;
    for (int a = 0; a < d; ++a) {
      const double pair = std::abs(dot(f[v], b.omega[v * d + a]));
      if (pair <= tol) {
        nc.d_axes.push_back(a);
        nc.max_pairing_on_d = std::max(nc.max_pairing_on_d, pair);
      }
    }
    cert.d_edges += nc.d_axes.size();
    if (nc.transversal) ++cert.transversal_nodes;
    cert.nodes.push_back(std::move(nc));
  }
  return cert;
}

VarsolveConfig varsolve_config_from_json(const nlohmann::json& j) {
  VarsolveConfig c;
  try {
    if (j.contains("lattice")) {
      c.d = j["lattice"].value("d", c.d);
      c.n = j["lattice"].value("N", c.n);
    }
    c.algebra = j.value("algebra", c.algebra);
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      c.weights.alpha1 = w.value("alpha1", c.weights.alpha1);
      c.weights.alpha2 = w.value("alpha2", c.weights.alpha2);
      c.weights.alpha3 = w.value("alpha3", c.weights.alpha3);
      c.weights.bound = w.value("C", c.weights.bound);
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("init")) {
      c.init_lambda = j["init"].value("lambda_scale", c.init_lambda);
      c.init_omega = j["init"].value("omega_scale", c.init_omega);
    }
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      c.solver.step = s.value("step", c.solver.step);
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
      c.solver.tol = s.value("tol", c.solver.tol);
      c.solver.max_backtracks = s.value("max_backtracks", c.solver.max_backtracks);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("invalid varsolve config: ") + e.what());
  }
  if (c.weights.alpha1 < 0 || c.weights.alpha3 < 0) throw UsageError("penalty weights must be nonnegative");
  return c;
}

nlohmann::ordered_json varsolve_config_to_json(const VarsolveConfig& c) {
  nlohmann::ordered_json j;
  j["lattice"] = {{"d", c.d}, {"N", c.n}};
  j["algebra"] = c.algebra;
  j["weights"] = {{"alpha1", c.weights.alpha1},
                  {"alpha2", c.weights.alpha2},
                  {"alpha3", c.weights.alpha3},
                  {"C", c.weights.bound}};
  j["seed"] = c.seed;
  j["init"] = {{"lambda_scale", c.init_lambda}, {"omega_scale", c.init_omega}};
  j["solver"] = {{"step", c.solver.step},
                 {"max_iter", c.solver.max_iter},
                 {"tol", c.solver.tol},
                 {"max_backtracks", c.solver.max_backtracks}};
  return j;
}

LatticeBundle random_bundle(const VarsolveConfig& c, std::shared_ptr<const LieAlgebra> g) {
  LatticeBundle b(Lattice(c.d, c.n), std::move(g));
  std::mt19937_64 rng(c.seed * 2 + 1);
  std::uniform_real_distribution<double> u(-c.init_omega, c.init_omega);
  for (auto& w : b.omega)
    for (auto& x : w) x = u(rng);
  return b;
}

FieldConfig random_field(const LatticeBundle& b, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed * 2 + 2);
  std::uniform_real_distribution<double> u(-scale, scale);
  FieldConfig f(b.lattice.nodes(), std::vector<double>(b.algebra_dim()));
  for (auto& v : f)
    for (auto& x : v) x = u(rng);
  return f;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,total,main,pen1,pen3,grad_norm,step\n";
  const auto old = out.precision(17);
  for (const auto& r : trace)
    out << r.iter << ',' << r.energy.total << ',' << r.energy.main << ',' << r.energy.pen1 << ',' << r.energy.pen3
        << ',' << r.grad_norm << ',' << r.step << '\n';
  out.precision(old);
}

}  // namespace spencer
