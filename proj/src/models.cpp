#include "pairscatter/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pairscatter::models {

using kinematics::big_f;
using kinematics::big_g;

double normalize_azimuth(double phi)
{
    if (!std::isfinite(phi))
        throw std::domain_error("azimuth must be finite");
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2 pi.
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

bool ModelSpec::same_density(const ModelSpec& other) const noexcept
{
    auto canonical = [](const ModelSpec& m) {
        if (m.kind == ModelKind::AnsatzFamily && m.b_ff == 0.0 && m.b_gg == 0.0)
            return ModelSpec{ModelKind::Recommended, 0.0, 0.0};
        if (m.kind != ModelKind::AnsatzFamily)
            return ModelSpec{m.kind, 0.0, 0.0};
        return m;
    };
    const ModelSpec a = canonical(*this);
    const ModelSpec b = canonical(other);
    return a.kind == b.kind && a.b_ff == b.b_ff && a.b_gg == b.b_gg;
}

std::string_view to_string(ModelKind kind) noexcept
{
    switch (kind)
    {
    case ModelKind::KnIndependent: return "kn-independent";
    case ModelKind::PwFixedFrame: return "pw-fixed-frame";
    case ModelKind::NaivePhi: return "naive-phi";
    case ModelKind::Recommended: return "recommended";
    case ModelKind::AnsatzFamily: return "ansatz";
    }
    return "unknown";
}

double single_norm() { return kTwoPi * kinematics::constants().big_f_int; }

double pair_norm()
{
    const double n = single_norm();
    return n * n;
}

double kn_bracket(const ScatterAngles& a) noexcept
{
    return big_f(a.chi()) - big_g(a.chi()) * std::cos(2.0 * a.phi());
}

double pw_bracket(const ScatterAngles& a1, const ScatterAngles& a2) noexcept
{
    return big_f(a1.chi()) * big_f(a2.chi())
           - big_g(a1.chi()) * big_g(a2.chi())
                 * std::cos(2.0 * (a2.phi() - a1.phi()));
}

double naive_bracket(const ScatterAngles& a1, const ScatterAngles& a2) noexcept
{
    return big_f(a1.chi()) * big_f(a2.chi())
           + big_g(a1.chi()) * big_g(a2.chi())
                 * std::cos(2.0 * (a2.phi() - a1.phi()));
}

double recommended_bracket(const ScatterAngles& a1,
                           const ScatterAngles& a2) noexcept
{
    const double f1 = big_f(a1.chi());
    const double f2 = big_f(a2.chi());
    const double g1 = big_g(a1.chi());
    const double g2 = big_g(a2.chi());
    return f1 * f2 + g1 * g2 * std::cos(2.0 * (a2.phi() - a1.phi()))
           - (f2 * g1 * std::cos(2.0 * a1.phi())
              + f1 * g2 * std::cos(2.0 * a2.phi()));
}

double kn_density(const ScatterAngles& a) noexcept
{
    return kn_bracket(a) / single_norm();
}

double pw_density_fixed(const ScatterAngles& a1,
                        const ScatterAngles& a2) noexcept
{
    return pw_bracket(a1, a2) / pair_norm();
}

double naive_phi_density(const ScatterAngles& a1,
                         const ScatterAngles& a2) noexcept
{
    return naive_bracket(a1, a2) / pair_norm();
}

double recommended_density(const ScatterAngles& a1,
                           const ScatterAngles& a2) noexcept
{
    return recommended_bracket(a1, a2) / pair_norm();
}

namespace {

// Additional cos 2phi1 / cos 2phi2 weights of the ansatz family, in density
// units, at fixed polar cosines.
struct AnsatzShift
{
    double cos1;
    double cos2;
};

AnsatzShift ansatz_shift(double f1, double g1, double f2, double g2,
                         double b_ff, double b_gg) noexcept
{
    const auto& k = kinematics::constants();
    const double scale = k.big_f_int * k.big_g_int;
    return {
        (k.big_g_int * f2 - k.big_f_int * g2)
            * (b_ff * k.big_f_int * f1 - b_gg * k.big_g_int * g1) / scale,
        (k.big_g_int * f1 - k.big_f_int * g1)
            * (b_ff * k.big_f_int * f2 - b_gg * k.big_g_int * g2) / scale,
    };
}

} // namespace

double ansatz_density(const ScatterAngles& a1, const ScatterAngles& a2,
                      double b_ff, double b_gg) noexcept
{
    const auto shift = ansatz_shift(big_f(a1.chi()), big_g(a1.chi()),
                                    big_f(a2.chi()), big_g(a2.chi()), b_ff,
                                    b_gg);
    return recommended_density(a1, a2) + shift.cos1 * std::cos(2.0 * a1.phi())
           + shift.cos2 * std::cos(2.0 * a2.phi());
}

double joint_density(const ModelSpec& model, const ScatterAngles& a1,
                     const ScatterAngles& a2) noexcept
{
    switch (model.kind)
    {
    case ModelKind::KnIndependent: return kn_density(a1) * kn_density(a2);
    case ModelKind::PwFixedFrame: return pw_density_fixed(a1, a2);
    case ModelKind::NaivePhi: return naive_phi_density(a1, a2);
    case ModelKind::Recommended: return recommended_density(a1, a2);
    case ModelKind::AnsatzFamily:
        return ansatz_density(a1, a2, model.b_ff, model.b_gg);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

AzimuthalCoefficients azimuthal_coefficients(const ModelSpec& model,
                                             PolarCosine chi1,
                                             PolarCosine chi2) noexcept
{
    const double n = pair_norm();
    const double f1 = big_f(chi1);
    const double f2 = big_f(chi2);
    const double g1 = big_g(chi1);
    const double g2 = big_g(chi2);

    AzimuthalCoefficients c;
    c.constant = f1 * f2 / n;
    switch (model.kind)
    {
    case ModelKind::KnIndependent:
        c.cos1 = -f2 * g1 / n;
        c.cos2 = -f1 * g2 / n;
        c.cos_product = g1 * g2 / n;
        break;
    case ModelKind::PwFixedFrame: c.cos_diff = -g1 * g2 / n; break;
    case ModelKind::NaivePhi: c.cos_diff = g1 * g2 / n; break;
    case ModelKind::Recommended:
    case ModelKind::AnsatzFamily:
        c.cos1 = -f2 * g1 / n;
        c.cos2 = -f1 * g2 / n;
        c.cos_diff = g1 * g2 / n;
        if (model.kind == ModelKind::AnsatzFamily)
        {
            const auto shift =
                ansatz_shift(f1, g1, f2, g2, model.b_ff, model.b_gg);
            c.cos1 += shift.cos1;
            c.cos2 += shift.cos2;
        }
        break;
    }
    return c;
}

double AngularGrid::chi(std::size_t i) const
{
    if (chi_points < 2 || i >= chi_points)
        throw std::out_of_range("AngularGrid: chi index");
    // Pin the end points exactly.
    if (i + 1 == chi_points)
        return 1.0;
    return -1.0 + 2.0 * static_cast<double>(i)
                      / static_cast<double>(chi_points - 1);
}

double AngularGrid::phi(std::size_t j) const
{
    if (phi_points == 0 || j >= phi_points)
        throw std::out_of_range("AngularGrid: phi index");
    return kTwoPi * static_cast<double>(j) / static_cast<double>(phi_points);
}

double grid_minimum(const ModelSpec& model, const AngularGrid& grid)
{
    if (grid.chi_points < 2 || grid.phi_points == 0)
        throw std::invalid_argument("grid_minimum: empty grid");

    // All azimuthal dependence is through cos 2(.), which has period pi; on
    // an even grid the second half of the azimuths repeats the first.
    const std::size_t nphi =
        grid.phi_points % 2 == 0 ? grid.phi_points / 2 : grid.phi_points;
    // cos 2(phi2 - phi1) on the grid depends only on (j2 - j1) mod nphi.
    std::vector<double> cos2(nphi);
    for (std::size_t j = 0; j < nphi; ++j)
        cos2[j] = std::cos(2.0 * grid.phi(j));

    std::vector<PolarCosine> chis;
    chis.reserve(grid.chi_points);
    for (std::size_t i = 0; i < grid.chi_points; ++i)
        chis.emplace_back(grid.chi(i));

    // Every supported density is symmetric under photon exchange, so chi
    // pairs with i1 > i2 are covered by their mirror image.
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i1 = 0; i1 < chis.size(); ++i1)
    {
        for (std::size_t i2 = i1; i2 < chis.size(); ++i2)
        {
            const auto c = azimuthal_coefficients(model, chis[i1], chis[i2]);
            for (std::size_t j1 = 0; j1 < nphi; ++j1)
            {
                const double base = c.constant + c.cos1 * cos2[j1];
                const double prod = c.cos_product * cos2[j1];
                for (std::size_t j2 = 0; j2 < nphi; ++j2)
                {
                    const std::size_t d = (j2 + nphi - j1) % nphi;
                    const double v = base + (c.cos2 + prod) * cos2[j2]
                                     + c.cos_diff * cos2[d];
                    lowest = std::min(lowest, v);
                }
            }
        }
    }
    return lowest;
}

double density_upper_bound(const ModelSpec& model)
{
    // (F1 + G1)(F2 + G2) <= 4 bounds every bracket: the azimuthal weights of
    // each model sum to at most the expanded product.
    double bound = 4.0 / pair_norm();
    if (model.kind == ModelKind::AnsatzFamily)
    {
        const auto& k = kinematics::constants();
        const double lhs =
            k.big_g_int * kinematics::kMaxF + k.big_f_int * kinematics::kMaxG;
        const double rhs = std::abs(model.b_ff) * k.big_f_int * kinematics::kMaxF
                           + std::abs(model.b_gg) * k.big_g_int
                                 * kinematics::kMaxG;
        bound += 2.0 * lhs * rhs / (k.big_f_int * k.big_g_int);
    }
    return bound;
}

} // namespace pairscatter::models
