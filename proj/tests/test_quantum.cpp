#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "pairscatter/quantum.hpp"
#include "support.hpp"

namespace ps = pairscatter;
namespace qm = pairscatter::quantum;
using doctest::Approx;
using ps::models::ScatterAngles;

TEST_CASE("singlet components")
{
    const auto s = qm::singlet();
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(s(0) == 0.0);
    CHECK(s(1) == Approx(h).epsilon(1e-15));
    CHECK(s(2) == Approx(-h).epsilon(1e-15));
    CHECK(s(3) == 0.0);
    CHECK(s.norm() == Approx(1.0).epsilon(1e-15));
    CHECK(s.dot(qm::product({1, 0}, {1, 0})) == 0.0);

    // Swapping the photons exchanges the |xy> and |yx> components.
    qm::PairState swapped = s;
    std::swap(swapped(1), swapped(2));
    CHECK((swapped + s).norm() < 1e-15);
}

TEST_CASE("rotated singlet is the singlet")
{
    for (double big_phi : {0.0, ps::kPi / 3, 1.234})
        CHECK((qm::rotated_singlet(big_phi) - qm::singlet()).cwiseAbs().maxCoeff() < 1e-14);
    testsupport::AngleSource src(41);
    for (int i = 0; i < 100; ++i)
        CHECK((qm::rotated_singlet(src.phi()) - qm::singlet()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("scatter matrix structure")
{
    CHECK((qm::scatter_matrix({1.0, 0.7}) - 2.0 * qm::ScatterMatrix::Identity()).norm() == 0.0);

    testsupport::AngleSource src(42);
    for (int i = 0; i < 200; ++i)
    {
        const auto a = src.angles();
        const double f = ps::kinematics::big_f(a.chi());
        const double g = ps::kinematics::big_g(a.chi());
        const auto s = qm::scatter_matrix(a);
        CHECK(s(0, 0) == Approx(f - g * std::cos(2 * a.phi())).epsilon(1e-14));
        CHECK(s(0, 1) == Approx(-g * std::sin(2 * a.phi())).epsilon(1e-14));
        CHECK(s(0, 1) == s(1, 0));
        Eigen::SelfAdjointEigenSolver<qm::ScatterMatrix> eig(s);
        CHECK(eig.eigenvalues()(0) == Approx(f - g).epsilon(1e-12));
        CHECK(eig.eigenvalues()(1) == Approx(f + g).epsilon(1e-12));
        CHECK(eig.eigenvalues()(0) >= 0.0);
    }
}

TEST_CASE("single-photon expectation")
{
    CHECK(qm::expectation_single(qm::polarization(0.0), {0.0, 0.0})
          == Approx(0.125).epsilon(1e-14));
    const double f = ps::kinematics::big_f(0.3), g = ps::kinematics::big_g(0.3);
    CHECK(qm::expectation_single(qm::polarization(ps::kPi / 4), {0.3, ps::kPi / 4})
          == Approx(f - g).epsilon(1e-14));
    CHECK_THROWS_AS(qm::expectation_single({1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);

    testsupport::AngleSource src(43);
    for (int i = 0; i < 1000; ++i)
    {
        const auto a = src.angles();
        const double big_phi = src.phi();
        // Polarization-relative azimuth is phi - Phi.
        const double kn = ps::models::kn_bracket({a.chi(), a.phi() - big_phi});
        CHECK(std::abs(qm::expectation_single(qm::polarization(big_phi), a) - kn) < 1e-12);
    }
}

TEST_CASE("polarization average of the single expectation is F")
{
    testsupport::AngleSource src(44);
    for (int i = 0; i < 50; ++i)
    {
        const auto a = src.angles();
        CHECK(std::abs(qm::polarization_averaged_single(a)
                       - ps::kinematics::big_f(a.chi()))
              < 1e-12);
    }
}

TEST_CASE("pair expectation is the Pryce-Ward bracket")
{
    CHECK(qm::expectation_pair({1.0, 0.2}, {1.0, 2.9}) == Approx(4.0).epsilon(1e-14));
    const double f1 = ps::kinematics::big_f(-0.4), f2 = ps::kinematics::big_f(0.6);
    CHECK(qm::expectation_pair({-0.4, 0.3}, {0.6, 0.3 + ps::kPi / 4})
          == Approx(f1 * f2).epsilon(1e-13));

    testsupport::AngleSource src(45);
    for (int i = 0; i < 1000; ++i)
    {
        const auto a1 = src.angles();
        const auto a2 = src.angles();
        const double pw = ps::models::pw_bracket(a1, a2);
        CHECK(std::abs(qm::expectation_pair(a1, a2) - pw) < 1e-12);
        CHECK(std::abs(qm::expectation_pair(a1, a2)
                       - ps::models::pw_density_fixed(a1, a2) * ps::models::pair_norm())
              < 1e-12);
        const double delta = src.phi();
        CHECK(std::abs(qm::expectation_pair({a1.chi(), a1.phi() + delta},
                                            {a2.chi(), a2.phi() + delta})
                       - qm::expectation_pair(a1, a2))
              < 1e-12);
    }
}

TEST_CASE("continuous decomposition of the singlet")
{
    const auto full = qm::decomposition_check(256);
    CHECK(full.plus < 1e-10);
    CHECK(full.minus < 1e-10);
    const auto half = qm::decomposition_check(128);
    CHECK(std::abs(full.plus - half.plus) < 1e-10);
    CHECK(std::abs(full.minus - half.minus) < 1e-10);
}

TEST_CASE("polarization averaging recovers Pryce-Ward")
{
    CHECK(qm::averaging_identity({1.0, 0.5}, {1.0, 1.7}, true) == Approx(0.0));
    testsupport::AngleSource src(46);
    for (int i = 0; i < 1000; ++i)
    {
        const auto f1 = src.angles();
        const auto f2 = src.angles();
        const double plus = qm::averaging_identity(f1, f2, true);
        const double minus = qm::averaging_identity(f1, f2, false);
        CHECK(plus < 1e-10);
        CHECK(minus < 1e-10);
        CHECK(std::abs(plus - minus) < 1e-12);
    }
}

TEST_CASE("naive form averages to Pryce-Ward, independent photons do not")
{
    // Under the pi/2 shift the naive bracket is the Pryce-Ward bracket.
    CHECK(qm::averaging_identity({0.5, 0.0}, {0.5, 0.0}, true, &ps::models::naive_bracket)
          < 1e-15);
    // Klein-Nishina product: the average keeps only half the correlation.
    auto kn_product = +[](const ScatterAngles& a1, const ScatterAngles& a2) {
        return ps::models::kn_bracket(a1) * ps::models::kn_bracket(a2);
    };
    const double g = ps::kinematics::big_g(0.5);
    CHECK(qm::averaging_identity({0.5, 0.0}, {0.5, 0.0}, true, kn_product)
          == Approx(0.5 * g * g).epsilon(1e-12));
}
