#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pairscatter/models.hpp"

namespace pairscatter::verify {

struct CheckResult
{
    std::string name;
    bool passed = false;
    double value = 0.0;     //!< measured deviation or statistic
    double tolerance = 0.0; //!< bound the value was compared against
    std::string detail;
};

struct Options
{
    //! Relax quadrature tolerances to 1e-6 and shrink sample sizes.
    bool fast = false;
    std::uint64_t seed = 20240611;
    //! Bracket used wherever the recommended density is checked. Swapping it
    //! lets tests confirm the suite catches a broken density.
    models::PairBracket recommended = &models::recommended_bracket;
};

//! Individual suites; each returns one or more named checks.
std::vector<CheckResult> check_constants(const Options& opt);
std::vector<CheckResult> check_normalization(const Options& opt);
std::vector<CheckResult> check_symmetry(const Options& opt);
std::vector<CheckResult> check_non_negativity(const Options& opt);
std::vector<CheckResult> check_marginals(const Options& opt);
std::vector<CheckResult> check_averaging_identity(const Options& opt);
std::vector<CheckResult> check_reduced(const Options& opt);
std::vector<CheckResult> check_quantum(const Options& opt);
std::vector<CheckResult> check_staged_vs_joint(const Options& opt);

//! Runs every suite above, in order.
std::vector<CheckResult> run_all(const Options& opt);

//! Name of the first failing check, or empty if all passed.
std::string first_failure(const std::vector<CheckResult>& results);

} // namespace pairscatter::verify
