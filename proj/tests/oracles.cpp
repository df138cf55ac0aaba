#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {
constexpr Complex kI{0.0, 1.0};
}

AmplitudePoint amplitude_solution(double g, double kappa, double t) {
  const Complex disc = Complex(kappa * kappa / 16.0 - g * g, 0.0);
  const Complex root = std::sqrt(disc);
  const Complex sp = -kappa / 4.0 + root;
  const Complex sm = -kappa / 4.0 - root;

  Complex ce, cp;
  if (std::abs(sp - sm) < 1e-12 * (std::abs(sp) + g)) {
    // confluent case kappa = 4g: repeated root s with s^2 = g^2
    const Complex s = -kappa / 4.0;
    ce = (1.0 - s * t) * std::exp(s * t);
    cp = -kI * g * t * std::exp(s * t);
  } else {
    ce = (sp * std::exp(sm * t) - sm * std::exp(sp * t)) / (sp - sm);
    cp = -kI * g * (std::exp(sp * t) - std::exp(sm * t)) / (sp - sm);
  }
  return {std::norm(ce), std::norm(cp), ce * std::conj(cp)};
}

double amplitude_slow_rate(double g, double kappa) {
  const Complex root = std::sqrt(Complex(kappa * kappa / 16.0 - g * g, 0.0));
  const Complex sp = -kappa / 4.0 + root;
  return 2.0 * std::abs(sp.real());
}

std::array<double, 3> thermal_detailed_balance(double n_th, double n_th_atom) {
  const double r1 = n_th_atom / (1.0 + n_th_atom);
  const double r2 = n_th / (1.0 + n_th);
  const double norm = 1.0 + r1 + r2;
  return {r1 / norm, r2 / norm, 1.0 / norm};
}

std::array<Complex, 4> dynamical_eigenvalues(double g, double kappa) {
  const Complex s = std::sqrt(Complex(kappa * kappa / 4.0 - 4.0 * g * g, 0.0));
  const Complex base(-kappa / 2.0, 0.0);
  return {base, base, base + s, base - s};
}

Eigen::Vector4cd modal_vector(double g, double kappa, Complex lambda) {
  const Complex c =
      kI * g * (kappa + 2.0 * lambda) /
      ((kappa + lambda) * (lambda + kappa / 2.0));
  Eigen::Vector4cd v;
  v << Complex(1.0, 0.0), -lambda / (kappa + lambda), c, -c;
  return v;
}

double slow_mode_weight(double g, double kappa) {
  const auto ev = dynamical_eigenvalues(g, kappa);
  const Complex slow = std::abs(ev[2]) < std::abs(ev[3]) ? ev[2] : ev[3];
  const Eigen::Vector4cd v = modal_vector(g, kappa, slow);
  return std::norm(v(0)) / v.squaredNorm();
}

double slow_mode_component_share(double g, double kappa) {
  const auto ev = dynamical_eigenvalues(g, kappa);
  const Complex slow = std::abs(ev[2]) < std::abs(ev[3]) ? ev[2] : ev[3];
  const Eigen::Vector4cd v = modal_vector(g, kappa, slow);
  // biorthogonal coefficient for r0 = e1 under the bilinear pairing u = conj(v)
  const Complex c = v(0) / (v.transpose() * v)(0);
  return std::abs(c * v(0));
}

}  // namespace oracle
