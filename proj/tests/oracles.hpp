#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

// Independent closed-form oracles used to pin expected values in tests.
// Everything here is derived by hand from the model definition and solved
// with textbook formulas only; none of it calls into the library under test.
namespace oracle {

using Complex = std::complex<double>;

// Solution of the lossy Rabi pair amplitude equations
//   c_e' = -i g c_p,   c_p' = -i g c_e - (kappa/2) c_p,
// with c_e(0) = 1, c_p(0) = 0.  Equivalent to the single-excitation sector
// at gamma = delta = 0 started from the excited atom: the excited-state
// population is |c_e|^2, the photon number |c_p|^2, and the coherence
// rho_{e0,g1} = c_e conj(c_p).  Roots: s = -kappa/4 +- sqrt(kappa^2/16 - g^2).
struct AmplitudePoint {
  double p_e;
  double n_ph;
  Complex coherence;
};
AmplitudePoint amplitude_solution(double g, double kappa, double t);

// Asymptotic decay rate of p_e from the amplitude solution: 2 |Re s_+|.
double amplitude_slow_rate(double g, double kappa);

// Detailed-balance stationary populations of the thermal three-state
// manifold at g = 0, returned as (rho11, rho22, rho33):
//   rho11/rho33 = n_a/(1+n_a),  rho22/rho33 = n/(1+n),  unit trace.
std::array<double, 3> thermal_detailed_balance(double n_th, double n_th_atom);

// Closed-form eigenvalues of the 4x4 dynamical matrix, in the order
// (-k/2, -k/2, -k/2 + s, -k/2 - s) with s = sqrt(k^2/4 - 4 g^2).
std::array<Complex, 4> dynamical_eigenvalues(double g, double kappa);

// Non-degenerate right eigenvector of the dynamical matrix for eigenvalue
// lambda, in the unnormalized form (1, -l/(k+l), c, -c) with
// c = i g (k + 2 l) / ((k + l)(l + k/2)).
Eigen::Vector4cd modal_vector(double g, double kappa, Complex lambda);

// Weight of the leading component of the slow modal vector at (g, kappa):
// |v_1|^2 / ||v||^2 for the eigenvalue closest to zero.
double slow_mode_weight(double g, double kappa);

// Bilinear expansion coefficient of r0 = (1,0,0,0) on the slow mode times
// that mode's first component: the slow mode's share of component 1.
double slow_mode_component_share(double g, double kappa);

}  // namespace oracle
