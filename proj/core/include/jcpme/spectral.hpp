#pragma once

#include <array>

#include "jcpme/hilbert.hpp"

namespace jcpme {

// Reduced coordinates of the resonant, atom-lossless single-excitation
// sector: r = (excited population, one-photon population, cross coherence,
// conjugate coherence).  The ground population is recovered from the trace.
using RVector = Eigen::Vector4cd;

// Generator of r' = R r.  Valid for delta = gamma = 0.
struct DynamicalMatrix {
  Eigen::Matrix4cd entries;
  double g = 0.0;
  double kappa = 0.0;
};

enum class Regime { Underdamped, Critical, Overdamped };

// The eigenvalue pair coalesces at kappa/g = 4; within ep_tol of it the
// matrix is treated as defective and modal propagation is refused.
inline constexpr double kCriticalKappaOverG = 4.0;
inline constexpr double kDefaultEpTol = 1e-3;

// Modal data of the dynamical matrix.  Right vectors are normalized under
// the bilinear form v^T v = 1 (sign fixed by the largest-modulus component),
// which for a complex-symmetric matrix makes the left vectors exactly the
// componentwise conjugates and the pairing <u_i|v_j> = delta_ij exact.
struct SpectralDecomposition {
  std::array<Complex, 4> eigenvalues;  // (-k/2, -k/2, -k/2 + s, -k/2 - s)
  Eigen::Matrix4cd right;              // columns v_i
  Eigen::Matrix4cd left;               // columns u_i = conj(v_i)
  Regime regime = Regime::Underdamped;
  bool ep_flag = false;
};

DynamicalMatrix build_dynamical_matrix(double g, double kappa);

// Roots of (l + k/2)^2 (l^2 + k l + 4 g^2): two at -k/2 and -k/2 +- s with
// s = sqrt(k^2/4 - 4 g^2) (imaginary below the coalescence point).
std::array<Complex, 4> closed_form_eigenvalues(double g, double kappa);

// Dense eigensolve of R, sorted by real part descending, ties by imaginary
// part descending.  Used to cross-check the closed forms.
std::array<Complex, 4> numerical_eigenvalues(const DynamicalMatrix& R);

Regime classify_regime(double g, double kappa, double ep_tol = kDefaultEpTol);

// Closed-form modal decomposition.  Within ep_tol of the coalescence point
// ep_flag is set and the vector blocks are not usable.
SpectralDecomposition eigen_decompose(const DynamicalMatrix& R,
                                      double ep_tol = kDefaultEpTol);

// Expansion coefficients c_i = <u_i|r0> with r0 = sum_i c_i v_i.
Eigen::Vector4cd mode_overlaps(const RVector& r0,
                               const SpectralDecomposition& dec);

// r(t) = sum_i c_i v_i exp(l_i t).
RVector propagate_spectral(const RVector& r0, const SpectralDecomposition& dec,
                           double t);

// Conversions between a three-state density matrix and its r coordinates.
RVector rvector_from_density(const DensityMatrix& rho);
DensityMatrix density_from_rvector(const RVector& r);

}  // namespace jcpme
