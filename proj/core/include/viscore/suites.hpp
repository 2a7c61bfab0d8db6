#pragma once

#include <string>
#include <vector>

#include "viscore/fixtures.hpp"

namespace viscore {

struct SuiteCheck {
    std::string name;
    enum class Status { pass, fail, inconclusive } status = Status::inconclusive;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<SuiteCheck> checks;

    bool passed() const;
    bool inconclusive() const;
};

struct SuiteOptions {
    int res_override = 0;  // 0 = fixture profile resolution
    uint64_t seed = 1;
    size_t subset_samples = 200;
    size_t emptiness_samples = 100;
    size_t plane_samples = 100;
    size_t interior_samples = 200;
    size_t core_samples = 50;
};

// suite names: cores, emptiness, embedding, combination
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);
std::vector<SuiteResult> run_verify(const std::string& suite_or_all, const SuiteOptions& opt);

// 0 = all pass, 1 = some check failed, 3 = inconclusive only
int verify_exit_code(const std::vector<SuiteResult>& results);
std::string verify_report_json(const std::vector<SuiteResult>& results,
                               const SuiteOptions& opt);

// Points at a prescribed hyperbolic distance from the octagon's invariant
// plane: lateral translation inside the plane, then a perpendicular offset.
BallPoint plane_offset_point(const CounterRng& rng, uint64_t stream, uint64_t ctr,
                             double lateral_radius, double distance);

}  // namespace viscore
