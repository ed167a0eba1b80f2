#include "pairscatter/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "pairscatter/quadrature.hpp"
#include "pairscatter/sampling.hpp"

namespace pairscatter::quantum {

PolVector polarization(double big_phi)
{
    return {std::cos(big_phi), std::sin(big_phi)};
}

PairState product(const PolVector& first, const PolVector& second)
{
    return {first(0) * second(0), first(0) * second(1), first(1) * second(0),
            first(1) * second(1)};
}

PairMatrix kron(const ScatterMatrix& a, const ScatterMatrix& b)
{
    PairMatrix out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

PairState singlet()
{
    const double h = 1.0 / std::sqrt(2.0);
    return {0.0, h, -h, 0.0};
}

PairState rotated_singlet(double big_phi)
{
    const PolVector p = polarization(big_phi);
    const PolVector q = polarization(big_phi + kPi / 2.0);
    return (product(p, q) - product(q, p)) / std::sqrt(2.0);
}

ScatterMatrix scatter_matrix(const models::ScatterAngles& a)
{
    const double f = kinematics::big_f(a.chi());
    const double g = kinematics::big_g(a.chi());
    const ScatterMatrix sigma_z{{1.0, 0.0}, {0.0, -1.0}};
    const ScatterMatrix sigma_x{{0.0, 1.0}, {1.0, 0.0}};
    return f * ScatterMatrix::Identity()
           - g * std::cos(2.0 * a.phi()) * sigma_z
           - g * std::sin(2.0 * a.phi()) * sigma_x;
}

double expectation_single(const PolVector& pol, const models::ScatterAngles& a)
{
    if (std::abs(pol.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("polarization vector must have unit norm");
    return pol.dot(scatter_matrix(a) * pol);
}

double expectation_pair(const models::ScatterAngles& a1,
                        const models::ScatterAngles& a2)
{
    const PairState psi = singlet();
    return psi.dot(kron(scatter_matrix(a1), scatter_matrix(a2)) * psi);
}

double polarization_averaged_single(const models::ScatterAngles& a,
                                    std::size_t nodes)
{
    auto integrand = [&](double big_phi) {
        return expectation_single(polarization(big_phi), a);
    };
    return quadrature::periodic(integrand, kTwoPi, nodes) / kTwoPi;
}

DecompositionError decomposition_check(std::size_t nodes)
{
    const double coeff = 1.0 / (kPi * std::sqrt(2.0));
    const PairState target = singlet();

    auto branch = [&](double sign) {
        double err = 0.0;
        for (int c = 0; c < 4; ++c)
        {
            auto component = [&](double big_phi) {
                return product(polarization(big_phi),
                               polarization(big_phi + sign * kPi / 2.0))(c);
            };
            const double value =
                sign * coeff * quadrature::periodic(component, kTwoPi, nodes);
            err = std::max(err, std::abs(value - target(c)));
        }
        return err;
    };
    return {branch(+1.0), branch(-1.0)};
}

double averaging_identity(const models::ScatterAngles& fixed1,
                          const models::ScatterAngles& fixed2, bool plus_sign,
                          models::PairBracket bracket, std::size_t nodes)
{
    using sampling::Photon;
    using sampling::PolarizationFrame;
    const auto sign =
        plus_sign ? sampling::OrthSign::Plus : sampling::OrthSign::Minus;

    auto integrand = [&](double big_phi) {
        const PolarizationFrame frame{big_phi, sign};
        const models::ScatterAngles a1{
            fixed1.chi(),
            sampling::to_polarization_frame(fixed1.phi(), frame, Photon::First)};
        const models::ScatterAngles a2{
            fixed2.chi(), sampling::to_polarization_frame(fixed2.phi(), frame,
                                                          Photon::Second)};
        return bracket(a1, a2);
    };
    const double average = quadrature::periodic(integrand, kTwoPi, nodes) / kTwoPi;
    return std::abs(average - models::pw_bracket(fixed1, fixed2));
}

} // namespace pairscatter::quantum
