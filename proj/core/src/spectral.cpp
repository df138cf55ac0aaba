#include "jcpme/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace jcpme {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_rates(double g, double kappa) {
  if (!(std::isfinite(g) && g > 0.0)) {
    throw std::invalid_argument("coupling rate g must be positive and finite");
  }
  if (!(std::isfinite(kappa) && kappa >= 0.0)) {
    throw std::invalid_argument("loss rate kappa must be non-negative and finite");
  }
}

// Sort descending by real part; within groups of (nearly) equal real part,
// descending by imaginary part.  Grouping keeps the order stable when a
// degenerate pair is split only by solver noise.
void sort_eigenvalues(std::array<Complex, 4>& vals) {
  std::sort(vals.begin(), vals.end(), [](const Complex& a, const Complex& b) {
    return a.real() > b.real();
  });
  double scale = 0.0;
  for (const Complex& v : vals) scale = std::max(scale, std::abs(v));
  const double tol = 1e-9 * std::max(scale, 1.0);
  std::size_t lo = 0;
  while (lo < vals.size()) {
    std::size_t hi = lo + 1;
    while (hi < vals.size() &&
           vals[lo].real() - vals[hi].real() <= tol) {
      ++hi;
    }
    std::sort(vals.begin() + lo, vals.begin() + hi,
              [](const Complex& a, const Complex& b) {
                return a.imag() > b.imag();
              });
    lo = hi;
  }
}

// Bilinear normalization v^T v = 1; the overall sign is fixed by making the
// largest-modulus component have positive real part (positive imaginary part
// when the real part vanishes).
Eigen::Vector4cd bilinear_normalize(Eigen::Vector4cd v) {
  const Complex b = (v.array() * v.array()).sum();
  if (std::abs(b) < 1e-12 * v.squaredNorm()) {
    throw NumericalError("modal basis is numerically defective");
  }
  v /= std::sqrt(b);
  int idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const Complex lead = v(idx);
  const double tiny = 1e-12 * std::abs(lead);
  if (lead.real() < -tiny ||
      (std::abs(lead.real()) <= tiny && lead.imag() < 0.0)) {
    v = -v;
  }
  return v;
}

Eigen::Vector4cd branch_vector(double g, double kappa, const Complex& lambda) {
  const Complex den = (kappa + lambda) * (lambda + kappa / 2.0);
  const Complex w = kI * g * (kappa + 2.0 * lambda) / den;
  Eigen::Vector4cd v;
  v << Complex{1.0, 0.0}, -lambda / (kappa + lambda), w, -w;
  return v;
}

}  // namespace

DynamicalMatrix build_dynamical_matrix(double g, double kappa) {
  require_rates(g, kappa);
  const Complex ig = kI * g;
  DynamicalMatrix R;
  R.g = g;
  R.kappa = kappa;
  R.entries << 0.0, 0.0, ig, -ig,
               0.0, -kappa, -ig, ig,
               ig, -ig, -kappa / 2.0, 0.0,
               -ig, ig, 0.0, -kappa / 2.0;
  return R;
}

std::array<Complex, 4> closed_form_eigenvalues(double g, double kappa) {
  require_rates(g, kappa);
  const Complex s = std::sqrt(Complex{kappa * kappa / 4.0 - 4.0 * g * g, 0.0});
  const Complex base{-kappa / 2.0, 0.0};
  return {base, base, base + s, base - s};
}

std::array<Complex, 4> numerical_eigenvalues(const DynamicalMatrix& R) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(R.entries, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed on the dynamical matrix");
  }
  std::array<Complex, 4> vals;
  for (int i = 0; i < 4; ++i) vals[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  sort_eigenvalues(vals);
  return vals;
}

Regime classify_regime(double g, double kappa, double ep_tol) {
  require_rates(g, kappa);
  if (!(std::isfinite(ep_tol) && ep_tol > 0.0)) {
    throw std::invalid_argument("ep_tol must be positive");
  }
  const double ratio = kappa / g;
  if (std::abs(ratio - kCriticalKappaOverG) <= ep_tol) return Regime::Critical;
  return ratio < kCriticalKappaOverG ? Regime::Underdamped : Regime::Overdamped;
}

SpectralDecomposition eigen_decompose(const DynamicalMatrix& R, double ep_tol) {
  SpectralDecomposition dec;
  dec.regime = classify_regime(R.g, R.kappa, ep_tol);
  dec.eigenvalues = closed_form_eigenvalues(R.g, R.kappa);
  dec.ep_flag = dec.regime == Regime::Critical;
  dec.right.setZero();
  dec.left.setZero();
  if (dec.ep_flag) return dec;

  const double g = R.g;
  const double kappa = R.kappa;
  Eigen::Vector4cd v1;
  v1 << 0.0, 0.0, 1.0, 1.0;
  const Complex tilt = kI * kappa / (4.0 * g);
  Eigen::Vector4cd v2;
  v2 << 1.0, 1.0, tilt, -tilt;
  dec.right.col(0) = bilinear_normalize(v1);
  dec.right.col(1) = bilinear_normalize(v2);
  dec.right.col(2) = bilinear_normalize(branch_vector(g, kappa, dec.eigenvalues[2]));
  dec.right.col(3) = bilinear_normalize(branch_vector(g, kappa, dec.eigenvalues[3]));
  dec.left = dec.right.conjugate();
  return dec;
}

Eigen::Vector4cd mode_overlaps(const RVector& r0,
                               const SpectralDecomposition& dec) {
  if (dec.ep_flag) {
    throw std::invalid_argument(
        "modal expansion is unusable at the critical point; use the ODE "
        "integrator instead");
  }
  return dec.left.adjoint() * r0;
}

RVector propagate_spectral(const RVector& r0, const SpectralDecomposition& dec,
                           double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  const Eigen::Vector4cd c = mode_overlaps(r0, dec);
  RVector r = RVector::Zero();
  for (int i = 0; i < 4; ++i) {
    r += c(i) * std::exp(dec.eigenvalues[static_cast<std::size_t>(i)] * t) *
         dec.right.col(i);
  }
  return r;
}

RVector rvector_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 3) {
    throw std::invalid_argument(
        "reduced coordinates are defined for the three-state sector only");
  }
  const Matrix& m = rho.entries();
  RVector r;
  r << m(2, 2), m(1, 1), m(2, 1), m(1, 2);
  return r;
}

DensityMatrix density_from_rvector(const RVector& r) {
  Matrix m = Matrix::Zero(3, 3);
  m(2, 2) = r(0);
  m(1, 1) = r(1);
  m(0, 0) = 1.0 - r(0).real() - r(1).real();
  m(2, 1) = r(2);
  m(1, 2) = r(3);
  return DensityMatrix::from_matrix(m);
}

}  // namespace jcpme
