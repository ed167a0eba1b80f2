#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "pairscatter/models.hpp"

// Linear-polarization algebra for the annihilation pair. Everything is real:
// the polarization bases and scattering matrices carry no complex phases.
namespace pairscatter::quantum {

//! Coefficients on {|x>, |y>}.
using PolVector = Eigen::Vector2d;
//! Coefficients on {|x>|x>, |x>|y>, |y>|x>, |y>|y>}.
using PairState = Eigen::Vector4d;
using ScatterMatrix = Eigen::Matrix2d;
using PairMatrix = Eigen::Matrix4d;

//! |Phi> = cos Phi |x> + sin Phi |y>.
PolVector polarization(double big_phi);

//! |a>_1 |b>_2.
PairState product(const PolVector& first, const PolVector& second);

//! Kronecker product a (x) b.
PairMatrix kron(const ScatterMatrix& a, const ScatterMatrix& b);

//! (|x>|y> - |y>|x>) / sqrt 2.
PairState singlet();

//! (|Phi>|Phi + pi/2> - |Phi + pi/2>|Phi>) / sqrt 2; equals singlet() for
//! every Phi.
PairState rotated_singlet(double big_phi);

//! F I - G cos 2phi sigma_z - G sin 2phi sigma_x, dimensionless. Multiply by
//! kinematics::kSinglePrefactor for physical units.
ScatterMatrix scatter_matrix(const models::ScatterAngles& a);

//! <Phi|S|Phi> = F - G cos 2(phi - Phi). Throws std::invalid_argument unless
//! pol has unit norm (to 1e-12).
double expectation_single(const PolVector& pol, const models::ScatterAngles& a);

//! <Psi| S1 (x) S2 |Psi> for the singlet, via the explicit 4x4 product.
double expectation_pair(const models::ScatterAngles& a1,
                        const models::ScatterAngles& a2);

//! Average of <Phi|S|Phi> over Phi on `nodes` equally spaced angles.
double polarization_averaged_single(const models::ScatterAngles& a,
                                    std::size_t nodes = 64);

struct DecompositionError
{
    double plus = 0.0;  //!< +(1/(pi sqrt 2)) int |Phi>|Phi + pi/2> dPhi
    double minus = 0.0; //!< -(1/(pi sqrt 2)) int |Phi>|Phi - pi/2> dPhi
};

//! Max componentwise deviation of both continuous decompositions from the
//! singlet, integrated with the periodic rule on `nodes` nodes.
DecompositionError decomposition_check(std::size_t nodes = 256);

/*!
 * |(1/2pi) int dPhi B(phi1(Phi), phi2(Phi, sign)) - PW(varphi1, varphi2)|
 *
 * Fixed-frame azimuths are held fixed while the assumed polarization Phi is
 * integrated; B defaults to the recommended bracket and PW is the Pryce-Ward
 * bracket. `bracket` can be swapped to check a modified density.
 */
double averaging_identity(const models::ScatterAngles& fixed1,
                          const models::ScatterAngles& fixed2, bool plus_sign,
                          models::PairBracket bracket =
                              &models::recommended_bracket,
                          std::size_t nodes = 64);

} // namespace pairscatter::quantum
