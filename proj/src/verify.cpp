#include "pairscatter/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairscatter/analysis.hpp"
#include "pairscatter/quadrature.hpp"
#include "pairscatter/quantum.hpp"
#include "pairscatter/sampling.hpp"

namespace pairscatter::verify {

using models::ScatterAngles;

namespace {

// Rectangle nodes for the azimuths: exact for the cos 2(.) dependence.
constexpr std::size_t kPhiNodes = 16;

double tol(const Options& opt, double strict)
{
    return opt.fast ? std::max(strict, 1e-6) : strict;
}

CheckResult make(std::string name, double value, double tolerance,
                 std::string detail = {})
{
    return {std::move(name), value <= tolerance, value, tolerance,
            std::move(detail)};
}

template <class Density>
double integrate_single(Density&& density)
{
    return quadrature::gauss_legendre(
        [&](double chi) {
            return quadrature::periodic(
                [&](double phi) { return density(ScatterAngles{chi, phi}); },
                kTwoPi, kPhiNodes);
        },
        -1.0, 1.0);
}

// Integral of a pair density over photon 1 only, photon 2 held fixed.
template <class Density>
double integrate_first(Density&& density, const ScatterAngles& a2)
{
    return integrate_single(
        [&](const ScatterAngles& a1) { return density(a1, a2); });
}

template <class Density>
double integrate_pair(Density&& density)
{
    return integrate_single([&](const ScatterAngles& a2) {
        return integrate_first(density, a2);
    });
}

ScatterAngles random_angles(sampling::RandomStream& rng)
{
    return {2.0 * rng.uniform() - 1.0, kTwoPi * rng.uniform()};
}

} // namespace

std::vector<CheckResult> check_constants(const Options& opt)
{
    const auto& k = kinematics::constants();
    auto f = [](double x) { return kinematics::big_f(x); };
    auto g = [](double x) { return kinematics::big_g(x); };
    const double f_quad = quadrature::adaptive(f, -1.0, 1.0, 1e-12).value;
    const double g_quad = quadrature::adaptive(g, -1.0, 1.0, 1e-12).value;

    std::vector<CheckResult> out;
    out.push_back(make("constants.big_f_int", std::abs(f_quad - k.big_f_int),
                       tol(opt, 1e-10)));
    out.push_back(make("constants.big_g_int", std::abs(g_quad - k.big_g_int),
                       tol(opt, 1e-10)));
    out.push_back(make("constants.ratio", std::abs(k.ratio - 0.3434), 5e-5));
    out.push_back(make("constants.lambda", std::abs(k.lambda - 0.08457), 5e-5));
    out.push_back(make("constants.lambda_closed_form",
                       std::abs(k.lambda - kinematics::lambda_approximation()),
                       5e-5));
    return out;
}

std::vector<CheckResult> check_normalization(const Options& opt)
{
    const double n = models::pair_norm();
    auto recommended = [&](const ScatterAngles& a1, const ScatterAngles& a2) {
        return opt.recommended(a1, a2) / n;
    };
    const double t = tol(opt, 1e-8);

    std::vector<CheckResult> out;
    out.push_back(make(
        "normalization.kn",
        std::abs(integrate_single([](const ScatterAngles& a) {
                     return models::kn_density(a);
                 })
                 - 1.0),
        t));
    out.push_back(make("normalization.pw_fixed",
                       std::abs(integrate_pair(models::pw_density_fixed) - 1.0),
                       t));
    out.push_back(make("normalization.naive_phi",
                       std::abs(integrate_pair(models::naive_phi_density) - 1.0),
                       t));
    out.push_back(make("normalization.recommended",
                       std::abs(integrate_pair(recommended) - 1.0), t));
    return out;
}

std::vector<CheckResult> check_symmetry(const Options& opt)
{
    sampling::RandomStream rng(opt.seed, 101);
    double exchange = 0.0;
    double period = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto a1 = random_angles(rng);
        const auto a2 = random_angles(rng);
        exchange = std::max(exchange, std::abs(opt.recommended(a1, a2)
                                               - opt.recommended(a2, a1)));
        const ScatterAngles s1{a1.chi(), a1.phi() + kPi};
        const ScatterAngles s2{a2.chi(), a2.phi() + kPi};
        const double base = opt.recommended(a1, a2);
        period = std::max(
            {period, std::abs(opt.recommended(s1, a2) - base),
             std::abs(opt.recommended(a1, s2) - base),
             std::abs(models::pw_bracket(s1, s2) - models::pw_bracket(a1, a2)),
             std::abs(models::kn_bracket(s1) - models::kn_bracket(a1))});
    }
    return {make("symmetry.exchange", exchange, 0.0),
            make("symmetry.period_pi", period, 1e-12)};
}

std::vector<CheckResult> check_non_negativity(const Options& opt)
{
    const models::AngularGrid grid;
    std::vector<ScatterAngles> points;
    points.reserve(grid.chi_points * grid.phi_points);
    for (std::size_t i = 0; i < grid.chi_points; ++i)
        for (std::size_t j = 0; j < grid.phi_points; ++j)
            points.emplace_back(grid.chi(i), grid.phi(j));

    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& a1 : points)
        for (const auto& a2 : points)
            lowest = std::min(lowest, opt.recommended(a1, a2));
    lowest /= models::pair_norm();

    std::ostringstream detail;
    detail << "min density " << lowest;
    return {make("non_negativity.recommended", -lowest, 1e-12, detail.str())};
}

std::vector<CheckResult> check_marginals(const Options& opt)
{
    const double n = models::pair_norm();
    auto recommended = [&](const ScatterAngles& a1, const ScatterAngles& a2) {
        return opt.recommended(a1, a2) / n;
    };
    sampling::RandomStream rng(opt.seed, 102);

    // Recommended density marginalized over either photon -> Klein-Nishina.
    double rec_err = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const auto spot = random_angles(rng);
        const double expected = models::kn_density(spot);
        const double over_first = integrate_first(recommended, spot);
        const double over_second = integrate_single(
            [&](const ScatterAngles& a2) { return recommended(spot, a2); });
        rec_err = std::max({rec_err, std::abs(over_first - expected),
                            std::abs(over_second - expected)});
    }

    // Azimuthal marginals of each pipeline vs (1/2pi)(1 - k cos 2phi).
    const double f_int = kinematics::constants().big_f_int;
    auto staged_pw = [&](const ScatterAngles& a1, const ScatterAngles& a2) {
        return kTwoPi * f_int * models::kn_density(a1)
               * models::naive_phi_density(a1, a2)
               / kinematics::big_f(a1.chi());
    };
    auto kn_kn = [](const ScatterAngles& a1, const ScatterAngles& a2) {
        return models::kn_density(a1) * models::kn_density(a2);
    };
    auto azimuth_marginal = [&](auto&& density, double phi2) {
        return quadrature::gauss_legendre(
            [&](double chi2) {
                return integrate_first(density, ScatterAngles{chi2, phi2});
            },
            -1.0, 1.0);
    };
    double kn_err = 0.0;
    double pw_err = 0.0;
    double flat_err = 0.0;
    double rec_phi_err = 0.0;
    using analysis::analytic_marginal;
    using analysis::MarginalKind;
    auto curve = [](double k, double phi) {
        return (1.0 - k * std::cos(2.0 * phi)) / kTwoPi;
    };
    for (int i = 0; i < 32; ++i)
    {
        const double phi = kTwoPi * (i + 0.5) / 32.0;
        kn_err = std::max(kn_err, std::abs(azimuth_marginal(kn_kn, phi)
                                           - curve(analytic_marginal(MarginalKind::KnKn), phi)));
        pw_err = std::max(pw_err, std::abs(azimuth_marginal(staged_pw, phi)
                                           - curve(analytic_marginal(MarginalKind::KnPw), phi)));
        flat_err = std::max(
            flat_err, std::abs(azimuth_marginal(models::naive_phi_density, phi)
                               - curve(analytic_marginal(MarginalKind::PwPw), phi)));
        rec_phi_err = std::max(
            rec_phi_err,
            std::abs(azimuth_marginal(recommended, phi)
                     - curve(analytic_marginal(MarginalKind::Recommended), phi)));
    }

    const double t = tol(opt, 1e-8);
    return {make("marginals.recommended_is_kn", rec_err, t),
            make("marginals.kn_kn_curve", kn_err, t),
            make("marginals.kn_pw_curve", pw_err, t),
            make("marginals.pw_pw_curve", flat_err, t),
            make("marginals.recommended_curve", rec_phi_err, t)};
}

std::vector<CheckResult> check_averaging_identity(const Options& opt)
{
    sampling::RandomStream rng(opt.seed, 103);
    double worst = 0.0;
    const int points = opt.fast ? 200 : 1000;
    for (int i = 0; i < points; ++i)
    {
        const auto fixed1 = random_angles(rng);
        const auto fixed2 = random_angles(rng);
        for (bool plus : {true, false})
            worst = std::max(worst, quantum::averaging_identity(
                                        fixed1, fixed2, plus, opt.recommended));
    }
    return {make("averaging_identity.recommended", worst, tol(opt, 1e-10))};
}

std::vector<CheckResult> check_reduced(const Options& opt)
{
    using models::ModelKind;
    const double r = kinematics::constants().ratio;
    const auto naive = analysis::reduced_2d(ModelKind::NaivePhi, 256, 256);
    const auto rec = analysis::reduced_2d(ModelKind::Recommended, 256, 256);

    // Closed-form R against direct chi-marginalization of the densities.
    const double n = models::pair_norm();
    auto recommended = [&](const ScatterAngles& a1, const ScatterAngles& a2) {
        return opt.recommended(a1, a2) / n;
    };
    auto chi_marginal = [](auto&& density, double phi1, double phi2) {
        return quadrature::gauss_legendre(
            [&](double chi1) {
                return quadrature::gauss_legendre(
                    [&](double chi2) {
                        return density(ScatterAngles{chi1, phi1},
                                       ScatterAngles{chi2, phi2});
                    },
                    -1.0, 1.0);
            },
            -1.0, 1.0);
    };
    sampling::RandomStream rng(opt.seed, 104);
    double form_err = 0.0;
    for (int i = 0; i < 64; ++i)
    {
        const double phi1 = kTwoPi * rng.uniform();
        const double phi2 = kTwoPi * rng.uniform();
        form_err = std::max(
            {form_err,
             std::abs(chi_marginal(recommended, phi1, phi2)
                      - analysis::reduced_density(ModelKind::Recommended, phi1,
                                                  phi2)),
             std::abs(chi_marginal(models::naive_phi_density, phi1, phi2)
                      - analysis::reduced_density(ModelKind::NaivePhi, phi1,
                                                  phi2))});
    }
    const double integral = quadrature::periodic(
        [](double phi1) {
            return quadrature::periodic(
                [&](double phi2) {
                    return analysis::reduced_density(ModelKind::Recommended,
                                                     phi1, phi2);
                },
                kTwoPi, kPhiNodes);
        },
        kTwoPi, kPhiNodes);

    return {make("reduced.naive_peak", std::abs(naive.max() - (1.0 + r * r)),
                 5e-4),
            make("reduced.recommended_peak",
                 std::abs(rec.max() - (1.0 + r) * (1.0 + r)), 5e-4),
            make("reduced.closed_form", form_err, tol(opt, 1e-8)),
            make("reduced.normalization", std::abs(integral - 1.0),
                 tol(opt, 1e-10))};
}

std::vector<CheckResult> check_quantum(const Options& opt)
{
    sampling::RandomStream rng(opt.seed, 105);
    double rotation = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const double big_phi = kTwoPi * rng.uniform();
        rotation = std::max(rotation, (quantum::rotated_singlet(big_phi)
                                       - quantum::singlet())
                                          .cwiseAbs()
                                          .maxCoeff());
    }

    double pair_err = 0.0;
    double single_err = 0.0;
    double average_err = 0.0;
    double psd_violation = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto a1 = random_angles(rng);
        const auto a2 = random_angles(rng);
        pair_err = std::max(pair_err, std::abs(quantum::expectation_pair(a1, a2)
                                               - models::pw_bracket(a1, a2)));
        // <Phi|S|Phi> at fixed-frame phi equals the KN bracket at phi - Phi.
        const double big_phi = kTwoPi * rng.uniform();
        const ScatterAngles relative{a1.chi(), a1.phi() - big_phi};
        single_err = std::max(
            single_err,
            std::abs(quantum::expectation_single(quantum::polarization(big_phi),
                                                 a1)
                     - models::kn_bracket(relative)));
        average_err = std::max(
            average_err, std::abs(quantum::polarization_averaged_single(a1)
                                  - kinematics::big_f(a1.chi())));
        const auto s = quantum::scatter_matrix(a1);
        const double low =
            0.5 * (s.trace()
                   - std::sqrt((s(0, 0) - s(1, 1)) * (s(0, 0) - s(1, 1))
                               + 4.0 * s(0, 1) * s(1, 0)));
        psd_violation = std::max(psd_violation, -low);
    }
    const auto decomposition = quantum::decomposition_check(256);

    return {make("quantum.rotated_singlet", rotation, 1e-14),
            make("quantum.expectation_pair", pair_err, 1e-12),
            make("quantum.expectation_single", single_err, 1e-12),
            make("quantum.polarization_average", average_err, 1e-12),
            make("quantum.scatter_matrix_psd", psd_violation, 1e-15),
            make("quantum.decomposition_plus", decomposition.plus, 1e-10),
            make("quantum.decomposition_minus", decomposition.minus, 1e-10)};
}

std::vector<CheckResult> check_staged_vs_joint(const Options& opt)
{
    const std::size_t n = opt.fast ? 200'000 : 1'000'000;
    const models::ModelSpec model{models::ModelKind::Recommended};
    const auto joint =
        sampling::run_pipeline(model, sampling::Scheme::Joint, n, opt.seed);
    const auto staged = sampling::run_pipeline(model, sampling::Scheme::Staged,
                                               n, opt.seed + 1);
    const auto a = analysis::histogram_phi_pair(joint.events, 32);
    const auto b = analysis::histogram_phi_pair(staged.events, 32);
    const auto test = analysis::chi_square_two_sample(a, b);

    std::ostringstream detail;
    detail << "chi2=" << test.chi2 << " dof=" << test.dof
           << " joint_acceptance=" << joint.stats.acceptance();
    CheckResult r{"sampling.staged_vs_joint", test.p_value > 1e-3,
                  test.p_value, 1e-3, detail.str()};
    return {r};
}

std::vector<CheckResult> run_all(const Options& opt)
{
    std::vector<CheckResult> all;
    for (auto suite :
         {check_constants, check_normalization, check_symmetry,
          check_non_negativity, check_marginals, check_averaging_identity,
          check_reduced, check_quantum, check_staged_vs_joint})
    {
        auto part = suite(opt);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

std::string first_failure(const std::vector<CheckResult>& results)
{
    for (const auto& r : results)
    {
        if (!r.passed)
            return r.name;
    }
    return {};
}

} // namespace pairscatter::verify
