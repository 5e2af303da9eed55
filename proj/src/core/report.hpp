#pragma once

#include "discrete_spencer.hpp"
#include "kernel_lab.hpp"
#include "lie_core.hpp"
#include "rep_decomp.hpp"
#include "spencer_ops.hpp"
#include "var_solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace spencer::report {

using Json = nlohmann::ordered_json;

/// Sign of det K, computed exactly over the connected blocks of K.
int killing_determinant_sign(const LieAlgebra& algebra);

Json rational(const Rational& q);
Json sparse_vector(const SparseVector& v);
Json certificate(const RankCertificate& c);

Json lie_info(const LieAlgebra& algebra);
Json matrix(const SpencerMatrix& m, const std::string& lambda_spec, bool include_entries);

struct KernelOptions {
  bool include_basis = false;
  bool module_analysis = false;
};
Json kernel(const LieAlgebra& algebra, const KernelBasis& kb, const std::string& lambda_spec,
            const KernelOptions& opts = {});
Json module_analysis(const LieAlgebra& algebra, const KernelBasis& kb);

struct VerifyOutcome {
  Json body;
  bool identities_hold = true;
};
VerifyOutcome verify(const LieAlgebra& algebra, const std::string& lambda_spec, int k_min, int k_max,
                     const AssemblyOptions& assembly, const EliminationOptions& elim);

Json cohomology(const LieAlgebra& algebra, const std::string& lambda_spec, int k, int torus_dim, int n,
                const AssemblyOptions& assembly, const EliminationOptions& elim);

Json tension(const TensionReport& r);

/// Runs the solver described by `config`; writes the trace CSV when `csv` is set.
Json varsolve(const VarsolveConfig& config, std::ostream* csv);

}  // namespace spencer::report
