#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pairscatter/kinematics.hpp"
#include "pairscatter/verify.hpp"

namespace ps = pairscatter;
namespace v = pairscatter::verify;

namespace {

// Recommended bracket with the sign of the G1 G2 term flipped.
double flipped_bracket(const ps::models::ScatterAngles& a1,
                       const ps::models::ScatterAngles& a2) noexcept
{
    const double g1 = ps::kinematics::big_g(a1.chi());
    const double g2 = ps::kinematics::big_g(a2.chi());
    return ps::models::recommended_bracket(a1, a2)
           - 2.0 * g1 * g2 * std::cos(2.0 * (a2.phi() - a1.phi()));
}

bool passed(const std::vector<v::CheckResult>& results, const std::string& name)
{
    const auto it = std::find_if(results.begin(), results.end(),
                                 [&](const auto& r) { return r.name == name; });
    REQUIRE(it != results.end());
    return it->passed;
}

} // namespace

TEST_CASE("fast verification passes")
{
    v::Options opt;
    opt.fast = true;
    const auto results = v::run_all(opt);
    CHECK(results.size() > 20);
    CHECK(v::first_failure(results).empty());
    for (const auto& r : results)
    {
        CAPTURE(r.name);
        CHECK(r.passed);
    }
}

TEST_CASE("a sign error in the recommended density is caught")
{
    v::Options opt;
    opt.fast = true;
    opt.recommended = &flipped_bracket;
    const auto results = v::check_averaging_identity(opt);
    CHECK_FALSE(passed(results, "averaging_identity.recommended"));
    CHECK(v::first_failure(v::run_all(opt)).size() > 0);
}

TEST_CASE("first_failure names the first failing check")
{
    std::vector<v::CheckResult> results{{"a", true}, {"b", false}, {"c", false}};
    CHECK(v::first_failure(results) == "b");
    results[1].passed = true;
    results[2].passed = true;
    CHECK(v::first_failure(results).empty());
}
