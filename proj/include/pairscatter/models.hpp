#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "pairscatter/kinematics.hpp"

namespace pairscatter::models {

using kinematics::PolarCosine;

//! Maps a finite azimuth into [0, 2 pi). Throws std::domain_error on NaN/inf.
double normalize_azimuth(double phi);

/*!
 * One photon's scattering outcome: polar cosine and azimuth.
 *
 * Whether the azimuth is measured from the fixed x-axis or from the photon's
 * initial polarization is decided by the caller; see PairEvent.
 */
class ScatterAngles
{
  public:
    ScatterAngles(double chi, double phi)
        : chi_(chi), phi_(normalize_azimuth(phi))
    {
    }
    ScatterAngles(PolarCosine chi, double phi)
        : chi_(chi), phi_(normalize_azimuth(phi))
    {
    }

    PolarCosine chi() const noexcept { return chi_; }
    double phi() const noexcept { return phi_; }

    friend bool operator==(const ScatterAngles& a, const ScatterAngles& b)
    {
        return a.chi_.value() == b.chi_.value() && a.phi_ == b.phi_;
    }

  private:
    PolarCosine chi_;
    double phi_;
};

enum class ModelKind
{
    KnIndependent, //!< product of two Klein-Nishina densities
    PwFixedFrame,  //!< Pryce-Ward in fixed-frame azimuths
    NaivePhi,      //!< Pryce-Ward naively re-expressed in polarization azimuths
    Recommended,   //!< reconciled density; KN marginals and PW average
    AnsatzFamily,  //!< two-parameter family containing Recommended at (0, 0)
};

struct ModelSpec
{
    ModelKind kind = ModelKind::Recommended;
    double b_ff = 0.0;
    double b_gg = 0.0;

    static ModelSpec ansatz(double b_ff, double b_gg)
    {
        return {ModelKind::AnsatzFamily, b_ff, b_gg};
    }

    //! Recommended and AnsatzFamily(0, 0) describe the same density.
    bool same_density(const ModelSpec& other) const noexcept;
};

std::string_view to_string(ModelKind kind) noexcept;

//! 2 pi F_int: normalization of the single-photon bracket.
double single_norm();
//! (2 pi F_int)^2: normalization of the pair brackets.
double pair_norm();

// Dimensionless brackets (no r0 prefactors, not normalized).

//! F - G cos 2phi, phi relative to the initial polarization.
double kn_bracket(const ScatterAngles& a) noexcept;
//! F1 F2 - G1 G2 cos 2(phi2 - phi1), fixed-frame azimuths.
double pw_bracket(const ScatterAngles& a1, const ScatterAngles& a2) noexcept;
//! F1 F2 + G1 G2 cos 2(phi2 - phi1), polarization-relative azimuths.
double naive_bracket(const ScatterAngles& a1, const ScatterAngles& a2) noexcept;
//! F1 F2 + G1 G2 cos 2(phi2 - phi1) - (F2 G1 cos 2phi1 + F1 G2 cos 2phi2).
double recommended_bracket(const ScatterAngles& a1,
                           const ScatterAngles& a2) noexcept;

using PairBracket = double (*)(const ScatterAngles&, const ScatterAngles&);

// Normalized probability densities over chi in [-1, 1], phi in [0, 2 pi).

double kn_density(const ScatterAngles& a) noexcept;
double pw_density_fixed(const ScatterAngles& a1,
                        const ScatterAngles& a2) noexcept;
double naive_phi_density(const ScatterAngles& a1,
                         const ScatterAngles& a2) noexcept;
double recommended_density(const ScatterAngles& a1,
                           const ScatterAngles& a2) noexcept;

/*!
 * Minimal-ansatz solution family with free coefficients b_ff, b_gg.
 *
 * Equals recommended_density at (0, 0). For other coefficients the value can
 * be negative; it is returned as-is.
 */
double ansatz_density(const ScatterAngles& a1, const ScatterAngles& a2,
                      double b_ff, double b_gg) noexcept;

//! Dispatch on model kind. PwFixedFrame expects fixed-frame azimuths, all
//! other kinds polarization-relative ones.
double joint_density(const ModelSpec& model, const ScatterAngles& a1,
                     const ScatterAngles& a2) noexcept;

/*!
 * Every joint density above has the form
 *   c0 + c1 cos 2phi1 + c2 cos 2phi2 + c12 cos 2(phi2 - phi1)
 *      + cprod cos 2phi1 cos 2phi2
 * at fixed (chi1, chi2); coefficients are in density units.
 */
struct AzimuthalCoefficients
{
    double constant = 0.0;
    double cos1 = 0.0;
    double cos2 = 0.0;
    double cos_diff = 0.0;
    double cos_product = 0.0;
};

AzimuthalCoefficients azimuthal_coefficients(const ModelSpec& model,
                                             PolarCosine chi1,
                                             PolarCosine chi2) noexcept;

//! Tensor grid over one photon's (chi, phi): chi on chi_points equally spaced
//! nodes including +-1, phi on phi_points nodes 2 pi j / phi_points.
struct AngularGrid
{
    std::size_t chi_points = 51;
    std::size_t phi_points = 64;

    double chi(std::size_t i) const;
    double phi(std::size_t j) const;
};

//! Minimum of joint_density over the product grid of both photons.
double grid_minimum(const ModelSpec& model, const AngularGrid& grid = {});

//! Upper bound on joint_density over the whole domain, valid for any model.
double density_upper_bound(const ModelSpec& model);

} // namespace pairscatter::models
