#pragma once

#include <numbers>

namespace pairscatter {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace kinematics {

//! Classical electron radius [cm].
inline constexpr double kElectronRadiusCm = 2.8179403262e-13;

//! Physical prefactor of the single-photon cross section, r0^2/2 [cm^2].
//! Evaluators in this library return the dimensionless bracket only; multiply
//! by this to obtain d^2 sigma / d^2 omega.
inline constexpr double kSinglePrefactor = kElectronRadiusCm * kElectronRadiusCm / 2.0;

//! Physical prefactor of the two-photon cross section, r0^4/16 [cm^4].
inline constexpr double kPairPrefactor =
    kSinglePrefactor * kSinglePrefactor / 4.0;

/*!
 * Cosine of the polar scattering angle, relative to the photon's initial
 * direction. Construction rejects values outside [-1, 1] (and NaN).
 */
class PolarCosine
{
  public:
    explicit PolarCosine(double chi);

    double value() const noexcept { return chi_; }

  private:
    double chi_;
};

//! F(chi) = (2 + (1 - chi)^3) / (2 - chi)^3, for 511 keV photons.
double big_f(PolarCosine chi) noexcept;

//! G(chi) = (1 - chi^2) / (2 - chi)^2, for 511 keV photons.
double big_g(PolarCosine chi) noexcept;

//! Checked scalar overloads; throw std::domain_error outside [-1, 1].
double big_f(double chi);
double big_g(double chi);

struct KinematicConstants
{
    double big_f_int; //!< integral of F over chi in [-1, 1]
    double big_g_int; //!< integral of G over chi in [-1, 1]
    double ratio;     //!< big_g_int / big_f_int
    double lambda;    //!< (2 big_f_int)^-1 * integral of G^2/F
};

/*!
 * Integral constants of the kinematic functions.
 *
 * The F and G integrals are the closed forms (40 - 27 ln 3)/9 and
 * 4 (ln 3 - 1). The suppression factor lambda has no exact closed form and is
 * evaluated by adaptive quadrature to an absolute tolerance of 1e-10. The
 * result is computed once and cached.
 */
const KinematicConstants& constants();

//! Closed-form approximation 5 ln 3 / (18 pi F_int) of lambda.
double lambda_approximation();

//! Global maxima of F and G on [-1, 1]: F(1) = 2, G(1/2) = 1/3.
inline constexpr double kMaxF = 2.0;
inline constexpr double kMaxG = 1.0 / 3.0;

} // namespace kinematics
} // namespace pairscatter
