#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pairscatter::quadrature {

struct Estimate
{
    double value = 0.0;
    double error = 0.0;
};

// Adaptive 15-point Gauss-Kronrod over [a, b], refined until the error
// estimate drops below abs_tol. Throws if the tolerance cannot be met within
// max_depth bisections.
template <class Func>
Estimate adaptive(Func&& f, double a, double b, double abs_tol = 1e-10,
                  unsigned max_depth = 30)
{
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("quadrature: abs_tol must be positive");

    // Boost terminates on error <= tol * L1; rescale so the bound is absolute.
    double l1 = 0.0;
    double err = 0.0;
    Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    const double rel = abs_tol / std::max(l1, 1e-300);

    Estimate out;
    out.value = Rule::integrate(f, a, b, max_depth, rel, &out.error, &l1);
    if (out.error > abs_tol)
        throw std::runtime_error("quadrature: tolerance not reached");
    return out;
}

// Fixed 30-point Gauss-Legendre. Used for the smooth polar factors in nested
// integrals, where F and G are analytic well beyond [-1, 1].
template <class Func>
double gauss_legendre(Func&& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

// Rectangle rule over one full period [0, period). Exact for trigonometric
// polynomials of degree below nodes.
template <class Func>
double periodic(Func&& f, double period, std::size_t nodes)
{
    if (nodes == 0)
        throw std::invalid_argument("quadrature: nodes must be positive");
    const double h = period / static_cast<double>(nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes; ++i)
        sum += f(h * static_cast<double>(i));
    return sum * h;
}

} // namespace pairscatter::quadrature
