#include "spencer/spencer.h"

#include "errors.hpp"
#include "kernel_lab.hpp"
#include "lie_core.hpp"
#include "report.hpp"
#include "spencer_ops.hpp"
#include "var_solver.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

struct spencer_algebra {
  std::shared_ptr<const spencer::LieAlgebra> algebra;
};

struct spencer_operator {
  std::shared_ptr<const spencer::LieAlgebra> algebra;
  std::string lambda_spec;
  spencer::SpencerMatrix matrix;
};

struct spencer_kernel {
  std::shared_ptr<const spencer::LieAlgebra> algebra;
  std::string lambda_spec;
  spencer::KernelBasis basis;
};

namespace {

thread_local std::string last_error;

template <class F>
spencer_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return SPENCER_OK;
  } catch (const spencer::UsageError& e) {
    last_error = e.what();
    return SPENCER_ERR_USAGE;
  } catch (const spencer::ResourceCapError& e) {
    last_error = e.what();
    return SPENCER_ERR_RESOURCE;
  } catch (const spencer::IdentityFailure& e) {
    last_error = e.what();
    return SPENCER_ERR_IDENTITY;
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return SPENCER_ERR_USAGE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SPENCER_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SPENCER_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SPENCER_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw spencer::UsageError(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* dump(const spencer::report::Json& j) { return dup_string(j.dump(2)); }

spencer_options resolve(const spencer_options* opts) {
  spencer_options o;
  spencer_options_default(&o);
  if (opts) o = *opts;
  if (o.threads == 0) o.threads = 1;
  return o;
}

spencer::AssemblyOptions assembly(const spencer_options& o) { return {o.threads, o.max_dim}; }

spencer::EliminationOptions elimination(const spencer_options& o) {
  spencer::EliminationOptions e;
  e.threads = o.threads;
  e.seed = o.seed;
  return e;
}

}  // namespace

extern "C" {

const char* spencer_version(void) { return "0.1.0"; }
const char* spencer_last_error(void) { return last_error.c_str(); }
void spencer_string_free(char* s) { std::free(s); }

void spencer_options_default(spencer_options* opts) {
  if (!opts) return;
  opts->threads = 1;
  opts->max_dim = spencer::kDefaultDimCap;
  opts->seed = spencer::EliminationOptions{}.seed;
}

spencer_status spencer_algebra_create(const char* label, spencer_algebra** out) {
  return guarded([&] {
    require(label, "label");
    require(out, "out");
    *out = new spencer_algebra{std::make_shared<const spencer::LieAlgebra>(spencer::make_algebra(label))};
  });
}

spencer_status spencer_algebra_from_json(const char* json, spencer_algebra** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    auto doc = nlohmann::json::parse(json);
    *out = new spencer_algebra{std::make_shared<const spencer::LieAlgebra>(spencer::algebra_from_json(doc))};
  });
}

void spencer_algebra_destroy(spencer_algebra* a) { delete a; }

spencer_status spencer_algebra_dim(const spencer_algebra* a, size_t* dim) {
  return guarded([&] {
    require(a, "algebra");
    require(dim, "dim");
    *dim = a->algebra->dim();
  });
}

spencer_status spencer_algebra_to_json(const spencer_algebra* a, char** json) {
  return guarded([&] {
    require(a, "algebra");
    require(json, "json");
    *json = dump(spencer::algebra_to_json(*a->algebra));
  });
}

spencer_status spencer_operator_create(const spencer_algebra* a, const char* variant, const char* lambda_spec, int k,
                                       const spencer_options* opts, spencer_operator** out) {
  return guarded([&] {
    require(a, "algebra");
    require(variant, "variant");
    require(out, "out");
    const auto o = resolve(opts);
    const auto v = spencer::parse_variant(variant);
    auto op = std::make_unique<spencer_operator>();
    op->algebra = a->algebra;
    if (v == spencer::SpencerVariant::classical) {
      op->matrix = spencer::delta_classical(*a->algebra, k, assembly(o));
    } else {
      require(lambda_spec, "lambda_spec");
      op->lambda_spec = lambda_spec;
      const auto lam = spencer::lambda_from_spec(*a->algebra, lambda_spec);
      op->matrix = v == spencer::SpencerVariant::constrained
                       ? spencer::delta_constrained(lam, *a->algebra, k, assembly(o))
                       : spencer::delta_equivalent_matrix(lam, *a->algebra, k, assembly(o));
    }
    *out = op.release();
  });
}

void spencer_operator_destroy(spencer_operator* op) { delete op; }

spencer_status spencer_operator_shape(const spencer_operator* op, uint64_t* rows, uint64_t* cols, uint64_t* nnz) {
  return guarded([&] {
    require(op, "operator");
    if (rows) *rows = op->matrix.entries.rows;
    if (cols) *cols = op->matrix.entries.cols;
    if (nnz) *nnz = op->matrix.entries.nnz();
  });
}

spencer_status spencer_operator_write_mtx(const spencer_operator* op, const char* path) {
  return guarded([&] {
    require(op, "operator");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw spencer::UsageError(std::string("cannot open '") + path + "' for writing");
    const auto& m = op->matrix;
    spencer::write_matrix_market(out, m.entries,
                                 op->algebra->label() + " " + spencer::to_string(m.variant) + " k=" +
                                     std::to_string(m.k_from) + (op->lambda_spec.empty() ? "" : " lambda=" + op->lambda_spec));
    if (!out) throw std::runtime_error("write failed");
  });
}

spencer_status spencer_operator_report(const spencer_operator* op, int include_entries, char** json) {
  return guarded([&] {
    require(op, "operator");
    require(json, "json");
    auto body = spencer::report::matrix(op->matrix, op->lambda_spec, include_entries != 0);
    body["algebra"] = op->algebra->label();
    *json = dump(body);
  });
}

spencer_status spencer_kernel_compute(const spencer_operator* op, const spencer_options* opts, spencer_kernel** out) {
  return guarded([&] {
    require(op, "operator");
    require(out, "out");
    const auto o = resolve(opts);
    auto kb = std::make_unique<spencer_kernel>();
    kb->algebra = op->algebra;
    kb->lambda_spec = op->lambda_spec;
    kb->basis = spencer::kernel(op->matrix, op->algebra->dim(), elimination(o));
    *out = kb.release();
  });
}

void spencer_kernel_destroy(spencer_kernel* kb) { delete kb; }

spencer_status spencer_kernel_dim(const spencer_kernel* kb, uint64_t* dim, uint64_t* rank) {
  return guarded([&] {
    require(kb, "kernel");
    if (dim) *dim = kb->basis.dim();
    if (rank) *rank = kb->basis.rank;
  });
}

spencer_status spencer_kernel_report(const spencer_kernel* kb, int include_basis, int module_analysis, char** json) {
  return guarded([&] {
    require(kb, "kernel");
    require(json, "json");
    spencer::report::KernelOptions ko;
    ko.include_basis = include_basis != 0;
    ko.module_analysis = module_analysis != 0;
    *json = dump(spencer::report::kernel(*kb->algebra, kb->basis, kb->lambda_spec, ko));
  });
}

spencer_status spencer_lie_info(const char* label, char** json) {
  return guarded([&] {
    require(label, "label");
    require(json, "json");
    *json = dump(spencer::report::lie_info(spencer::make_algebra(label)));
  });
}

spencer_status spencer_verify(const char* label, const char* lambda_spec, int k_min, int k_max,
                              const spencer_options* opts, char** json, int* identities_hold) {
  return guarded([&] {
    require(label, "label");
    require(lambda_spec, "lambda_spec");
    require(json, "json");
    const auto o = resolve(opts);
    const auto alg = spencer::make_algebra(label);
    auto res = spencer::report::verify(alg, lambda_spec, k_min, k_max, assembly(o), elimination(o));
    if (identities_hold) *identities_hold = res.identities_hold ? 1 : 0;
    *json = dump(res.body);
  });
}

spencer_status spencer_cohomology(const char* label, const char* lambda_spec, int k, int torus_dim, int subdivisions,
                                  const spencer_options* opts, char** json) {
  return guarded([&] {
    require(label, "label");
    require(lambda_spec, "lambda_spec");
    require(json, "json");
    if (k < 1) throw spencer::UsageError("k must be >= 1");
    const auto o = resolve(opts);
    const auto alg = spencer::make_algebra(label);
    *json = dump(spencer::report::cohomology(alg, lambda_spec, k, torus_dim, subdivisions, assembly(o), elimination(o)));
  });
}

spencer_status spencer_tension(const char* label, int64_t h11, int64_t kernel_dim, char** json) {
  return guarded([&] {
    require(label, "label");
    require(json, "json");
    const auto datum = spencer::parse_algebra_label(label);
    std::optional<std::uint64_t> kd;
    if (kernel_dim >= 0) kd = static_cast<std::uint64_t>(kernel_dim);
    *json = dump(spencer::report::tension(spencer::tension_report(datum, h11, kd)));
  });
}

spencer_status spencer_varsolve(const char* config_json, const char* csv_path, char** json) {
  return guarded([&] {
    require(config_json, "config_json");
    require(json, "json");
    const auto cfg = spencer::varsolve_config_from_json(nlohmann::json::parse(config_json));
    std::ofstream csv;
    if (csv_path) {
      csv.open(csv_path);
      if (!csv) throw spencer::UsageError(std::string("cannot open '") + csv_path + "' for writing");
    }
    *json = dump(spencer::report::varsolve(cfg, csv_path ? &csv : nullptr));
  });
}

spencer_status spencer_min_irrep_dim(const char* label, int* out) {
  return guarded([&] {
    require(label, "label");
    require(out, "out");
    const auto d = spencer::parse_algebra_label(label);
    *out = spencer::min_irrep_dim(d.family, d.rank);
  });
}

}  // extern "C"
