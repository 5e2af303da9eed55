#pragma once

#include "lie_core.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace spencer {

/// Periodic d-dimensional lattice with N nodes per axis. Node ids are mixed-radix
/// with axis 0 least significant. Edge e = node * d + axis joins node to its
/// positive neighbour along `axis`; the reversed edge carries -omega.
class Lattice {
 public:
  Lattice(int d, int n);
  int dim() const { return d_; }
  int size() const { return n_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t edges() const { return nodes_ * static_cast<std::size_t>(d_); }
  std::size_t neighbor(std::size_t node, int axis, int step = 1) const;
  std::vector<int> coords(std::size_t node) const;
  std::size_t node(const std::vector<int>& coords) const;

 private:
  int d_, n_;
  std::size_t nodes_ = 1;
};

/// Dense real structure constants: for each (x, j), the list of (m, c^m_{xj}).
struct RealStructure {
  std::size_t dim = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> table;  // index x * dim + j
  explicit RealStructure(const LieAlgebra& algebra);
};

struct LatticeBundle {
  Lattice lattice;
  std::shared_ptr<const LieAlgebra> algebra;
  std::shared_ptr<const RealStructure> structure;
  std::vector<std::vector<double>> omega;  // per canonical edge, length dim g

  LatticeBundle(Lattice l, std::shared_ptr<const LieAlgebra> g);
  std::size_t algebra_dim() const { return structure->dim; }
};

using FieldConfig = std::vector<std::vector<double>>;  // per node, coefficients in g*

struct Weights {
  double alpha1 = 1.0;
  double alpha2 = 0.0;  // reserved: the obstruction penalty is not implemented
  double alpha3 = 1.0;
  double bound = 1.0;   // C
};

struct EnergyBreakdown {
  double main = 0, pen1 = 0, pen3 = 0, total = 0;
  Weights weights;
};

/// (ad*_w lam)_j = -sum_{x,m} w_x c^m_{xj} lam_m
std::vector<double> coadjoint(const RealStructure& s, const std::vector<double>& w, const std::vector<double>& lam);
/// lam(head) - lam(tail) + ad*_omega lam(tail) on a canonical edge.
std::vector<double> edge_residual(const LatticeBundle& b, const FieldConfig& f, std::size_t edge);

EnergyBreakdown energy(const LatticeBundle& b, const FieldConfig& f, const Weights& w);
FieldConfig gradient(const LatticeBundle& b, const FieldConfig& f, const Weights& w);
double cartan_residual(const LatticeBundle& b, const FieldConfig& f);
double cartan_residual(const LatticeBundle& b, const FieldConfig& f, const std::vector<std::size_t>& edges);

struct SolverConfig {
  double step = 0.1;
  int max_iter = 2000;
  double tol = 1e-8;
  int max_backtracks = 60;
};

struct TraceRow {
  int iter = 0;
  EnergyBreakdown energy;
  double grad_norm = 0;
  double step = 0;
};

struct SolveResult {
  FieldConfig config;
  std::vector<TraceRow> trace;
  std::string status;  // converged, max_iter, backtrack_exhausted, diverged
  bool converged() const { return status == "converged"; }
};

SolveResult minimize(const LatticeBundle& b, const FieldConfig& start, const Weights& w, const SolverConfig& cfg);

/// Comb spanning tree from node 0 along positive edges: edge (v, a) is used when
/// v_a < N-1 and v_b = 0 for every b < a.
std::vector<std::size_t> comb_tree(const Lattice& l);
/// Field obtained by transporting `seed` from node 0 along the comb tree so that
/// the modified Cartan residual vanishes on every tree edge.
FieldConfig covariantly_constant(const LatticeBundle& b, const std::vector<double>& seed);

struct NodeCertificate {
  std::size_t node = 0;
  bool degenerate = false;  // |lam| <= tol here
  bool transversal = false;
  int rank_d = 0, rank_v = 0, rank_t = 0;
  std::vector<int> d_axes;  // incident edge directions with |<lam, omega>| <= tol
  double max_pairing_on_d = 0;
};

struct CompatibilityCertificate {
  double tol = 1e-8;
  std::vector<NodeCertificate> nodes;
  std::size_t degenerate_nodes = 0;
  std::size_t transversal_nodes = 0;
  std::size_t d_edges = 0;
};

/// Per node, T = R^d (+) g and f(a, X) = <lam, omega(a) + X>. D = ker f; V is the
/// vertical line through lam's coordinate vector. Transversal when D + V = T.
CompatibilityCertificate certify_compatible_pair(const LatticeBundle& b, const FieldConfig& f, double tol = 1e-8);

struct VarsolveConfig {
  int d = 2;
  int n = 4;
  std::string algebra = "A1";
  Weights weights;
  std::uint64_t seed = 1;
  double init_lambda = 1.0;
  double init_omega = 0.5;
  SolverConfig solver;
};

VarsolveConfig varsolve_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json varsolve_config_to_json(const VarsolveConfig& c);

/// Seeded random gauge field and starting field.
LatticeBundle random_bundle(const VarsolveConfig& c, std::shared_ptr<const LieAlgebra> g);
FieldConfig random_field(const LatticeBundle& b, std::uint64_t seed, double scale);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace spencer
