#pragma once

#include <stdexcept>
#include <string>

namespace attnrat {

// Malformed input: bad JSON, nonpositive weights, dimension mismatches,
// normalization violations. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A rational post-processing denominator is zero on some attained head sum,
// or a compiled denominator vanishes on the cube. Exit code 3.
class DenominatorVanished : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Requested n exceeds the configured exhaustive cap. Exit code 4.
class ScaleCapExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// No Newman degree up to the configured cap meets the per-gate budget. Exit code 5.
class ApproximationBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Some head sum leaves [-1,1]^d, so the ReLU margin pipeline does not apply.
class RangeAssumptionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace attnrat
