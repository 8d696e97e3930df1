#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ising2mm/phase_space.hpp"

namespace ising2mm {

struct CheckWitness {
    std::string where;
    double value = 0;
    double threshold = 0;
};

struct SuiteReport {
    std::string suite;
    bool pass = true;
    int checked = 0;
    double worst = 0;  // largest residual seen, in the suite's own units
    std::vector<CheckWitness> failures;
};

struct CheckOptions {
    int samples = 200;
    std::uint64_t seed = 7;
    int grid = 10;  // lensing grid side
    ABCPoint point{1.059, 0.880, 0.880};
};

// Uniform in the (b, a, c) box coordinates of R, staying `margin` away from its faces.
ABCPoint sample_interior(std::mt19937_64& rng, double margin = 0.05);

SuiteReport check_roundtrip(const CheckOptions& opt);
SuiteReport check_lensing(const CheckOptions& opt);
SuiteReport check_sextic(const CheckOptions& opt);
SuiteReport check_discriminant(const CheckOptions& opt);
SuiteReport check_series(const CheckOptions& opt);

std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const CheckOptions& opt);

}  // namespace ising2mm
