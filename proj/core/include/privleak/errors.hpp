#pragma once

#include <stdexcept>

namespace privleak {

// Partition-equation solving failed because the section averages do not
// determine the unknowns (near-zero denominator or pivot).
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The cut hyperplane holds no records, so its average is undefined.
struct empty_mid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An attack could not start or finish under its stated preconditions.
struct attack_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A neighborhood admits no substitution cycle (duplicate values on every
// candidate edge).
struct infeasible_cycle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Observed data contradicts what the obfuscator could have produced.
struct inconsistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace privleak
