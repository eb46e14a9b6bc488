#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace csit::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    unsigned threads = 0;
};

/// Fast self-check of the model and solvers: Kepler residuals, force and
/// potential consistency, symmetries, Wronskian, the analytic origin
/// monodromy, winding bounds, the curve-pair Hessian and integrator
/// reversibility. Each entry reports a measured worst case.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options = {});

} // namespace csit::verify
