#include <doctest.h>

#include <stdexcept>

#include "pairscatter/pipeline.hpp"
#include "support.hpp"

namespace ps = pairscatter;
namespace pl = pairscatter::pipeline;
using doctest::Approx;
using ps::models::ModelKind;

TEST_CASE("pipeline names")
{
    CHECK(pl::names().size() == 6);
    const auto direct = pl::parse("pw-direct");
    CHECK(direct.model.kind == ModelKind::PwFixedFrame);
    CHECK(direct.scheme == ps::sampling::Scheme::Staged);
    CHECK(direct.marginal == ps::analysis::MarginalKind::KnPw);
    CHECK(pl::parse("pw-joint").scheme == ps::sampling::Scheme::Joint);
    CHECK(pl::parse("naive-phi").marginal == ps::analysis::MarginalKind::PwPw);
    const auto ans = pl::parse("ansatz", 0.001, -0.002);
    CHECK(ans.model.kind == ModelKind::AnsatzFamily);
    CHECK(ans.model.b_ff == 0.001);
    CHECK(ans.model.b_gg == -0.002);
    CHECK_THROWS_AS(pl::parse("ansatz", 0.1), std::invalid_argument);
    CHECK_THROWS_AS(pl::parse("recommended", 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pl::parse("klein-nishina"), std::invalid_argument);
}

TEST_CASE("marginal summary contents")
{
    pl::RunConfig cfg;
    cfg.samples = 50000;
    cfg.seed = 3;
    cfg.bins = 16;
    const auto out = pl::marginals(pl::parse("kn-independent"), cfg);
    CHECK(out.histogram.total() == 50000);
    REQUIRE(out.histogram.analytic());
    CHECK(out.summary.number("n") == 50000);
    CHECK(out.summary.number("seed") == 3);
    CHECK(out.summary.number("k_analytic") == ps::kinematics::constants().ratio);
    CHECK(out.summary.number("k_hat") == out.summary.number("k_hat_2"));
    CHECK(out.summary.find("reduced_chi2") != nullptr);
    CHECK(std::get<std::string>(*out.summary.find("model")) == "kn-independent");

    cfg.photon = ps::sampling::Photon::First;
    cfg.samples = 20;
    const auto tiny = pl::marginals(pl::parse("pw-direct"), cfg);
    CHECK(tiny.summary.number("k_hat") == tiny.summary.number("k_hat_1"));
    CHECK(tiny.summary.find("chi2") == nullptr); // too few events per bin
}

TEST_CASE("fit summary")
{
    const auto& run = testsupport::cached_run("recommended", 10000000, 2024);
    const auto s = pl::fit(run.events);
    const double r = ps::kinematics::constants().ratio;
    CHECK(std::abs(s.number("k_hat_1") - r) < 2.5e-3);
    CHECK(std::abs(s.number("corr_polarization") - r * r) < 2.5e-3);
    CHECK(std::abs(s.number("corr_fixed") + r * r) < 2.5e-3);
    CHECK(s.number("corr_fixed_err") > 0.0);
}
