#pragma once

#include "cspforge/labelcover.hpp"
#include "cspforge/structures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cspforge {

// Per-case outcome of a verification suite. A failing case carries a
// serialized counterexample and a command that reruns exactly that case.
struct CaseResult {
    std::string name;
    bool pass = false;
    std::string detail;
    std::string repro;
};

struct SuiteReport {
    std::string suite;
    std::string claim; // the statement the suite exercises
    uint64_t seed = 0;
    std::vector<CaseResult> cases;
    long long millis = 0;

    bool all_pass() const;
    int failures() const;
};

std::vector<std::string> suite_names();

// runs one suite over a seeded corpus; only_case >= 0 restricts to a single
// case index for reproduction
SuiteReport run_suite(const std::string& name, uint64_t seed, int only_case = -1);

std::string report_text(const SuiteReport& r);
std::string report_json(const SuiteReport& r);

// The explicit homomorphism kappa_k^{A,B}(X) -> B induced by a homomorphism
// g : X -> A: [K; b] maps to b(g|_K). Returns it only if it is well defined
// on the collapse and verifies relation by relation.
std::optional<Homomorphism> consistency_completeness_witness(const Structure& a,
                                                             const Structure& b, int k,
                                                             const Structure& x,
                                                             const Homomorphism& g,
                                                             Structure* kappa_out = nullptr);

} // namespace cspforge
