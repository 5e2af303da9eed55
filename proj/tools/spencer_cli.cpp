#include "spencer/spencer.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;

struct Params {
  std::string out, csv, mtx, config;
  unsigned threads = 1;
  std::uint64_t max_dim = 0;
  std::uint64_t seed = 0;
  std::string algebra = "A1";
  std::string lambda = "preset:cartan1";
  std::string variant = "constrained";
  int k = 1;
  int k_min = 1, k_max = 3;
  int torus = 2, n = 4;
  std::int64_t h11 = -1;
  std::int64_t kernel_dim = -1;
  bool include_basis = false, include_entries = false, module = false;
};

class Failure {
 public:
  explicit Failure(spencer_status s) : status(s), message(spencer_last_error()) {}
  spencer_status status;
  std::string message;
};

void check(spencer_status s) {
  if (s != SPENCER_OK) throw Failure(s);
}

/// Takes ownership of a C string returned by the library.
Json take_json(char* raw) {
  Json j = Json::parse(raw);
  spencer_string_free(raw);
  return j;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json lambda_seed(const std::string& spec) {
  auto s = spec;
  if (!s.empty() && s.front() == '-') s.erase(0, 1);
  for (const char* prefix : {"random:", "sparse:"})
    if (s.rfind(prefix, 0) == 0) return s.substr(std::string(prefix).size());
  return nullptr;
}

spencer_options options(const Params& p) {
  spencer_options o;
  spencer_options_default(&o);
  o.threads = p.threads;
  if (p.max_dim) o.max_dim = p.max_dim;
  if (p.seed) o.seed = p.seed;
  return o;
}

void emit(const Params& p, const std::string& command, Json params, const std::string& algebra, Json seeds, Json body) {
  Json report;
  report["schema_version"] = 1;
  report["manifest"] = Json{{"command", command},
                            {"params", std::move(params)},
                            {"algebra", algebra.empty() ? Json(nullptr) : Json(algebra)},
                            {"seeds", std::move(seeds)},
                            {"tool_version", spencer_version()},
                            {"timestamp", utc_timestamp()}};
  report["body"] = std::move(body);
  const std::string text = report.dump(2) + "\n";
  if (p.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(p.out);
  if (!f) throw std::runtime_error("cannot open '" + p.out + "' for writing");
  f << text;
}

Json global_params(const Params& p) {
  spencer_options o = options(p);
  return Json{{"threads", o.threads}, {"max_dim", o.max_dim}, {"seed", o.seed}};
}

int run(const std::string& command, const Params& p) {
  const spencer_options o = options(p);
  Json params = global_params(p);
  Json seeds{{"elimination", o.seed}};

  if (command == "lie info") {
    char* raw = nullptr;
    check(spencer_lie_info(p.algebra.c_str(), &raw));
    emit(p, command, params, p.algebra, Json::object(), take_json(raw));
    return 0;
  }
  if (command == "matrix" || command == "kernel") {
    params["k"] = p.k;
    params["variant"] = p.variant;
    params["lambda"] = p.lambda;
    seeds["lambda"] = lambda_seed(p.lambda);
    spencer_algebra* alg = nullptr;
    check(spencer_algebra_create(p.algebra.c_str(), &alg));
    std::unique_ptr<spencer_algebra, decltype(&spencer_algebra_destroy)> alg_guard(alg, spencer_algebra_destroy);
    spencer_operator* op = nullptr;
    check(spencer_operator_create(alg, p.variant.c_str(), p.lambda.c_str(), p.k, &o, &op));
    std::unique_ptr<spencer_operator, decltype(&spencer_operator_destroy)> op_guard(op, spencer_operator_destroy);
    if (command == "matrix") {
      params["include_entries"] = p.include_entries;
      params["mtx"] = p.mtx.empty() ? Json(nullptr) : Json(p.mtx);
      if (!p.mtx.empty()) check(spencer_operator_write_mtx(op, p.mtx.c_str()));
      char* raw = nullptr;
      check(spencer_operator_report(op, p.include_entries, &raw));
      emit(p, command, params, p.algebra, seeds, take_json(raw));
      return 0;
    }
    params["include_basis"] = p.include_basis;
    params["module"] = p.module;
    params["h11"] = p.h11 >= 0 ? Json(p.h11) : Json(nullptr);
    spencer_kernel* kb = nullptr;
    check(spencer_kernel_compute(op, &o, &kb));
    std::unique_ptr<spencer_kernel, decltype(&spencer_kernel_destroy)> kb_guard(kb, spencer_kernel_destroy);
    char* raw = nullptr;
    check(spencer_kernel_report(kb, p.include_basis, p.module, &raw));
    Json body = take_json(raw);
    if (p.h11 >= 0) {
      std::uint64_t dim = 0;
      check(spencer_kernel_dim(kb, &dim, nullptr));
      char* traw = nullptr;
      check(spencer_tension(p.algebra.c_str(), p.h11, static_cast<std::int64_t>(dim), &traw));
      body["tension"] = take_json(traw);
    }
    emit(p, command, params, p.algebra, seeds, std::move(body));
    return 0;
  }
  if (command == "verify") {
    params["lambda"] = p.lambda;
    params["k_min"] = p.k_min;
    params["k_max"] = p.k_max;
    seeds["lambda"] = lambda_seed(p.lambda);
    char* raw = nullptr;
    int hold = 0;
    check(spencer_verify(p.algebra.c_str(), p.lambda.c_str(), p.k_min, p.k_max, &o, &raw, &hold));
    emit(p, command, params, p.algebra, seeds, take_json(raw));
    return hold ? 0 : static_cast<int>(SPENCER_ERR_IDENTITY);
  }
  if (command == "cohomology") {
    params["lambda"] = p.lambda;
    params["k"] = p.k;
    params["torus"] = p.torus;
    params["n"] = p.n;
    seeds["lambda"] = lambda_seed(p.lambda);
    char* raw = nullptr;
    check(spencer_cohomology(p.algebra.c_str(), p.lambda.c_str(), p.k, p.torus, p.n, &o, &raw));
    emit(p, command, params, p.algebra, seeds, take_json(raw));
    return 0;
  }
  if (command == "tension") {
    params = Json{{"h11", p.h11}, {"kernel_dim", p.kernel_dim >= 0 ? Json(p.kernel_dim) : Json(nullptr)}};
    char* raw = nullptr;
    check(spencer_tension(p.algebra.c_str(), p.h11, p.kernel_dim, &raw));
    emit(p, command, params, p.algebra, Json::object(), take_json(raw));
    return 0;
  }
  if (command == "varsolve") {
    std::ifstream in(p.config);
    if (!in) {
      std::cerr << "error: cannot read config '" << p.config << "'\n";
      return kExitUsage;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    Params q = p;
    // `--out x.csv` without --csv names the trace file; the JSON report then goes to stdout
    if (q.csv.empty() && q.out.size() > 4 && q.out.substr(q.out.size() - 4) == ".csv") {
      q.csv = q.out;
      q.out.clear();
    }
    Json cfg;
    try {
      cfg = Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: malformed config: " << e.what() << "\n";
      return kExitUsage;
    }
    char* raw = nullptr;
    check(spencer_varsolve(ss.str().c_str(), q.csv.empty() ? nullptr : q.csv.c_str(), &raw));
    Json body = take_json(raw);
    params = Json{{"config", p.config}, {"csv", q.csv.empty() ? Json(nullptr) : Json(q.csv)}};
    Json vseeds{{"varsolve", body["config"]["seed"]}};
    const std::string algebra = body["config"]["algebra"];
    emit(q, command, params, algebra, vseeds, std::move(body));
    return 0;
  }
  std::cerr << "error: unknown command\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spencer operator toolkit"};
  app.require_subcommand(1);
  Params p;
  app.add_option("--out", p.out, "Write the JSON report here instead of stdout");
  app.add_option("--csv", p.csv, "Trace CSV path (varsolve)");
  app.add_option("--threads", p.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--max-dim", p.max_dim, "Dimension cap for symmetric powers");
  app.add_option("--seed", p.seed, "Seed for prime selection");
  app.set_version_flag("--version", spencer_version());

  auto algebra_opt = [&](CLI::App* sub) { sub->add_option("--algebra", p.algebra, "Algebra label, e.g. A1, E7"); };
  auto lambda_opt = [&](CLI::App* sub) {
    sub->add_option("--lambda", p.lambda, "preset:zero, preset:cartan<i>, random:<seed>, sparse:<seed>, coeffs:<q,...>");
  };

  auto* lie = app.add_subcommand("lie", "Lie algebra tables");
  lie->require_subcommand(1);
  auto* info = lie->add_subcommand("info", "Dimension, roots, Killing form sign, Jacobi verdict");
  algebra_opt(info);

  auto* matrix = app.add_subcommand("matrix", "Assemble a Spencer operator matrix");
  algebra_opt(matrix);
  lambda_opt(matrix);
  matrix->add_option("--k", p.k, "Source degree")->check(CLI::Range(1, 64));
  matrix->add_option("--variant", p.variant, "classical, constrained or equivalent");
  matrix->add_option("--mtx", p.mtx, "Matrix Market export path");
  matrix->add_flag("--include-entries", p.include_entries, "Embed all entries in the report");

  auto* kernel = app.add_subcommand("kernel", "Exact kernel of a Spencer operator");
  algebra_opt(kernel);
  lambda_opt(kernel);
  kernel->add_option("--k", p.k, "Source degree")->check(CLI::Range(1, 64));
  kernel->add_option("--variant", p.variant, "classical, constrained or equivalent");
  kernel->add_flag("--include-basis", p.include_basis, "Embed the kernel basis");
  kernel->add_flag("--module", p.module, "Submodule test and character decomposition");
  kernel->add_option("--h11", p.h11, "Compare the measured dimension with this Hodge number")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Mirror antisymmetry, kernel mirror stability, nilpotency audit");
  algebra_opt(verify);
  lambda_opt(verify);
  verify->add_option("--k-min", p.k_min, "Lowest degree")->check(CLI::Range(1, 64));
  verify->add_option("--k-max", p.k_max, "Highest degree")->check(CLI::Range(1, 64));

  auto* cohom = app.add_subcommand("cohomology", "Degenerate Spencer cohomology on a cubical torus");
  algebra_opt(cohom);
  lambda_opt(cohom);
  cohom->add_option("--k", p.k, "Symmetric degree")->check(CLI::Range(1, 64));
  cohom->add_option("--torus", p.torus, "Torus dimension");
  cohom->add_option("--n", p.n, "Subdivisions per axis");

  auto* tension = app.add_subcommand("tension", "Dimension bounds from the minimal representation and h11");
  algebra_opt(tension);
  tension->add_option("--h11", p.h11, "Hodge number h^{1,1}")->required()->check(CLI::NonNegativeNumber);
  tension->add_option("--kernel-dim", p.kernel_dim, "Measured kernel dimension")->check(CLI::NonNegativeNumber);

  auto* varsolve = app.add_subcommand("varsolve", "Penalized energy minimization on a lattice");
  varsolve->add_option("--config", p.config, "JSON run configuration")->required();

  for (auto* sub : {lie, info, matrix, kernel, verify, cohom, tension, varsolve}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string command;
  if (lie->parsed()) command = "lie info";
  for (auto* sub : {matrix, kernel, verify, cohom, tension, varsolve})
    if (sub->parsed()) command = sub->get_name();

  try {
    return run(command, p);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.status == SPENCER_ERR_INTERNAL ? kExitOther : static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
