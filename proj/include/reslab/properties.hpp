#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace reslab {

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    std::size_t n_paths = 20000;
    std::size_t n_steps = 100;
    std::uint64_t seed = 7;
    double tolerance_scale = 1.0;
};

// Structural properties of the resilience rate: cash-insensitivity, positive
// homogeneity, time consistency, comparison, concavity, L2 stability and the
// acceptance-set round trips.
std::vector<PropertyResult> run_property_suite(const SuiteOptions& options = {});

// Fast smoke checks of every module.
std::vector<PropertyResult> run_selftest(const SuiteOptions& options = {});

}  // namespace reslab
