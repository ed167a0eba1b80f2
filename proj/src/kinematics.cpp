#include "pairscatter/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pairscatter/quadrature.hpp"

namespace pairscatter::kinematics {

PolarCosine::PolarCosine(double chi) : chi_(chi)
{
    if (!(chi >= -1.0 && chi <= 1.0))
        throw std::domain_error("polar cosine outside [-1, 1]: "
                                + std::to_string(chi));
}

double big_f(PolarCosine chi) noexcept
{
    const double x = chi.value();
    const double one_minus = 1.0 - x;
    const double two_minus = 2.0 - x;
    return (2.0 + one_minus * one_minus * one_minus)
           / (two_minus * two_minus * two_minus);
}

double big_g(PolarCosine chi) noexcept
{
    const double x = chi.value();
    const double two_minus = 2.0 - x;
    return (1.0 - x * x) / (two_minus * two_minus);
}

double big_f(double chi) { return big_f(PolarCosine{chi}); }
double big_g(double chi) { return big_g(PolarCosine{chi}); }

namespace {

KinematicConstants compute_constants()
{
    const double ln3 = std::log(3.0);
    KinematicConstants c{};
    c.big_f_int = (40.0 - 27.0 * ln3) / 9.0;
    c.big_g_int = 4.0 * (ln3 - 1.0);
    c.ratio = c.big_g_int / c.big_f_int;

    auto g2_over_f = [](double x) {
        const PolarCosine chi{x};
        const double g = big_g(chi);
        return g * g / big_f(chi);
    };
    const auto integral = quadrature::adaptive(g2_over_f, -1.0, 1.0, 1e-10);
    c.lambda = integral.value / (2.0 * c.big_f_int);
    return c;
}

} // namespace

const KinematicConstants& constants()
{
    static const KinematicConstants cached = compute_constants();
    return cached;
}

double lambda_approximation()
{
    return 5.0 * std::log(3.0) / (18.0 * kPi * constants().big_f_int);
}

} // namespace pairscatter::kinematics
