#include "jcpme/liouvillian.hpp"

#include <cmath>

namespace jcpme {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_zero_temperature(const ModelParams& p) {
  if (p.n_th != 0.0 || p.n_th_atom != 0.0)
    throw std::invalid_argument(
        "thermal occupations require the ThermalRestricted generator");
}

void require_three_state(const ModelParams& p) {
  if (p.N != 1)
    throw std::invalid_argument("three-state generators require N == 1");
}

// Canonical index layout for N = 1: |g,0> = 0, |g,1> = 1, |e,0> = 2.
constexpr int kG0 = 0;
constexpr int kG1 = 1;
constexpr int kE0 = 2;

void single_excitation_into(const Matrix& rho, const ModelParams& p,
                            Matrix& out) {
  const double g = p.g, kappa = p.kappa, gamma = p.gamma, delta = p.delta;
  const Complex j12 = rho(kG1, kE0) - rho(kE0, kG1);  // rho_21 - rho_12

  out(kE0, kE0) = -kI * g * j12 - gamma * rho(kE0, kE0);
  out(kG1, kG1) = kI * g * j12 - kappa * rho(kG1, kG1);
  out(kG0, kG0) = gamma * rho(kE0, kE0) + kappa * rho(kG1, kG1);

  const double damp12 = 0.5 * (gamma + kappa);
  out(kE0, kG1) = -kI * delta * rho(kE0, kG1) -
                  kI * g * (rho(kG1, kG1) - rho(kE0, kE0)) -
                  damp12 * rho(kE0, kG1);
  out(kG1, kE0) = kI * delta * rho(kG1, kE0) +
                  kI * g * (rho(kG1, kG1) - rho(kE0, kE0)) -
                  damp12 * rho(kG1, kE0);

  out(kE0, kG0) = -kI * (delta / 2.0) * rho(kE0, kG0) -
                  kI * g * rho(kG1, kG0) - 0.5 * gamma * rho(kE0, kG0);
  out(kG0, kE0) = kI * (delta / 2.0) * rho(kG0, kE0) +
                  kI * g * rho(kG0, kG1) - 0.5 * gamma * rho(kG0, kE0);
  out(kG1, kG0) = kI * (delta / 2.0) * rho(kG1, kG0) -
                  kI * g * rho(kE0, kG0) - 0.5 * kappa * rho(kG1, kG0);
  out(kG0, kG1) = -kI * (delta / 2.0) * rho(kG0, kG1) +
                  kI * g * rho(kG0, kE0) - 0.5 * kappa * rho(kG0, kG1);
}

void thermal_into(const Matrix& rho, const ModelParams& p, Matrix& out) {
  const double g = p.g, kappa = p.kappa, gamma = p.gamma, delta = p.delta;
  const double n = p.n_th, na = p.n_th_atom;
  const Complex j12 = rho(kG1, kE0) - rho(kE0, kG1);

  out(kE0, kE0) = -kI * g * j12 - gamma * (1.0 + na) * rho(kE0, kE0) +
                  gamma * na * rho(kG0, kG0);
  out(kG1, kG1) = kI * g * j12 - kappa * (1.0 + n) * rho(kG1, kG1) +
                  kappa * n * rho(kG0, kG0);
  out(kG0, kG0) = gamma * (1.0 + na) * rho(kE0, kE0) +
                  kappa * (1.0 + n) * rho(kG1, kG1) -
                  (gamma * na + kappa * n) * rho(kG0, kG0);

  const double damp12 =
      0.5 * gamma * (1.0 + 2.0 * na) + 0.5 * kappa * (1.0 + n);
  out(kE0, kG1) = -kI * delta * rho(kE0, kG1) -
                  kI * g * (rho(kG1, kG1) - rho(kE0, kE0)) -
                  damp12 * rho(kE0, kG1);
  out(kG1, kE0) = kI * delta * rho(kG1, kE0) +
                  kI * g * (rho(kG1, kG1) - rho(kE0, kE0)) -
                  damp12 * rho(kG1, kE0);

  const double damp13 = 0.5 * gamma * (1.0 + na) + 0.5 * kappa * n;
  out(kE0, kG0) = -kI * (delta / 2.0) * rho(kE0, kG0) -
                  kI * g * rho(kG1, kG0) - damp13 * rho(kE0, kG0);
  out(kG0, kE0) = kI * (delta / 2.0) * rho(kG0, kE0) +
                  kI * g * rho(kG0, kG1) - damp13 * rho(kG0, kE0);

  const double damp23 = 0.5 * kappa * (1.0 + 2.0 * n) + 0.5 * gamma * na;
  out(kG1, kG0) = kI * (delta / 2.0) * rho(kG1, kG0) -
                  kI * g * rho(kE0, kG0) - damp23 * rho(kG1, kG0);
  out(kG0, kG1) = -kI * (delta / 2.0) * rho(kG0, kG1) +
                  kI * g * rho(kG0, kE0) - damp23 * rho(kG0, kG1);
}

void n_manifold_into(const Matrix& rho, const ModelParams& p, Matrix& out) {
  const int N = p.N;
  const double g = p.g, kappa = p.kappa, gamma = p.gamma, delta = p.delta;
  const auto iG = [N](int n) { return n; };
  const auto iE = [N](int n) { return N + 1 + n; };
  (void)iG;

  // gg block: n, m in [0, N]
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) {
      Complex d = -0.5 * kappa * (n + m) * rho(n, m);
      if (n >= 1) d -= kI * g * std::sqrt(double(n)) * rho(iE(n - 1), m);
      if (m >= 1) d += kI * g * std::sqrt(double(m)) * rho(n, iE(m - 1));
      if (n + 1 <= N && m + 1 <= N)
        d += kappa * std::sqrt(double((n + 1) * (m + 1))) * rho(n + 1, m + 1);
      if (n <= N - 1 && m <= N - 1) d += gamma * rho(iE(n), iE(m));
      out(n, m) = d;
    }

  // ee block: n, m in [0, N-1]
  for (int n = 0; n <= N - 1; ++n)
    for (int m = 0; m <= N - 1; ++m) {
      Complex d = (-0.5 * kappa * (n + m) - gamma) * rho(iE(n), iE(m));
      d -= kI * g * std::sqrt(double(n + 1)) * rho(n + 1, iE(m));
      d += kI * g * std::sqrt(double(m + 1)) * rho(iE(n), m + 1);
      if (n + 1 <= N - 1 && m + 1 <= N - 1)
        d += kappa * std::sqrt(double((n + 1) * (m + 1))) *
             rho(iE(n + 1), iE(m + 1));
      out(iE(n), iE(m)) = d;
    }

  // eg block: n in [0, N-1], m in [0, N]
  for (int n = 0; n <= N - 1; ++n)
    for (int m = 0; m <= N; ++m) {
      Complex d = (-kI * delta - 0.5 * kappa * (n + m) - 0.5 * gamma) *
                  rho(iE(n), m);
      d -= kI * g * std::sqrt(double(n + 1)) * rho(n + 1, m);
      if (m >= 1) d += kI * g * std::sqrt(double(m)) * rho(iE(n), iE(m - 1));
      if (n + 1 <= N - 1 && m + 1 <= N)
        d += kappa * std::sqrt(double((n + 1) * (m + 1))) *
             rho(iE(n + 1), m + 1);
      out(iE(n), m) = d;
    }

  // ge block: n in [0, N], m in [0, N-1]
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N - 1; ++m) {
      Complex d = (kI * delta - 0.5 * kappa * (n + m) - 0.5 * gamma) *
                  rho(n, iE(m));
      if (n >= 1) d -= kI * g * std::sqrt(double(n)) * rho(iE(n - 1), iE(m));
      d += kI * g * std::sqrt(double(m + 1)) * rho(n, m + 1);
      if (n + 1 <= N && m + 1 <= N - 1)
        d += kappa * std::sqrt(double((n + 1) * (m + 1))) *
             rho(n + 1, iE(m + 1));
      out(n, iE(m)) = d;
    }
}

void check_shape(const Matrix& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("state dimension does not match parameters");
}

}  // namespace

Matrix rhs_single_excitation(const Matrix& rho, const ModelParams& p) {
  p.validate();
  require_three_state(p);
  require_zero_temperature(p);
  check_shape(rho, 3);
  Matrix out(3, 3);
  single_excitation_into(rho, p, out);
  return out;
}

Matrix rhs_n_manifold(const Matrix& rho, const ModelParams& p) {
  p.validate();
  require_zero_temperature(p);
  check_shape(rho, p.dimension());
  Matrix out(p.dimension(), p.dimension());
  n_manifold_into(rho, p, out);
  return out;
}

Matrix rhs_thermal(const Matrix& rho, const ModelParams& p) {
  p.validate();
  require_three_state(p);
  check_shape(rho, 3);
  Matrix out(3, 3);
  thermal_into(rho, p, out);
  return out;
}

Generator::Generator(GeneratorKind kind, const ModelParams& p)
    : kind_(kind), p_(p), dim_(p.dimension()) {
  p_.validate();
  switch (kind_) {
    case GeneratorKind::SingleExcitation:
      require_three_state(p_);
      require_zero_temperature(p_);
      break;
    case GeneratorKind::NManifold:
      require_zero_temperature(p_);
      break;
    case GeneratorKind::ThermalRestricted:
      require_three_state(p_);
      break;
  }
}

void Generator::apply(const Matrix& rho, Matrix& drho) const {
  drho.resize(dim_, dim_);
  switch (kind_) {
    case GeneratorKind::SingleExcitation:
      single_excitation_into(rho, p_, drho);
      break;
    case GeneratorKind::NManifold:
      n_manifold_into(rho, p_, drho);
      break;
    case GeneratorKind::ThermalRestricted:
      thermal_into(rho, p_, drho);
      break;
  }
}

Matrix Generator::apply(const Matrix& rho) const {
  Matrix out;
  apply(rho, out);
  return out;
}

GeneratorMatrix generator_matrix(const Generator& gen) {
  const int d = gen.dim();
  GeneratorMatrix L(d * d, d * d);
  Matrix probe = Matrix::Zero(d, d);
  Matrix image(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      probe(i, j) = 1.0;
      gen.apply(probe, image);
      probe(i, j) = 0.0;
      L.col(j * d + i) = Eigen::Map<const Eigen::VectorXcd>(image.data(),
                                                            d * d);
    }
  return L;
}

GeneratorKind select_generator_kind(const ModelParams& p) {
  p.validate();
  if (p.N >= 2) {
    require_zero_temperature(p);
    return GeneratorKind::NManifold;
  }
  if (p.n_th > 0.0 || p.n_th_atom > 0.0) return GeneratorKind::ThermalRestricted;
  return GeneratorKind::SingleExcitation;
}

DensityMatrix stationary_state(GeneratorKind kind, const ModelParams& p) {
  const Generator gen(kind, p);
  const GeneratorMatrix L = generator_matrix(gen);
  Eigen::ComplexEigenSolver<GeneratorMatrix> solver(L, true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("generator eigendecomposition failed");

  const auto& values = solver.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  const double null_tol = 1e-10 * std::max(scale, 1.0);

  int null_index = -1;
  int null_count = 0;
  for (int i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) < null_tol) {
      ++null_count;
      if (null_index < 0 || std::abs(values(i)) < std::abs(values(null_index)))
        null_index = i;
    }
  }
  if (null_count == 0)
    throw NumericalError("no stationary state resolved within tolerance");
  if (null_count > 1)
    throw std::invalid_argument(
        "degenerate stationary state: multiple null eigenvalues (all decay "
        "channels are off)");

  const int d = gen.dim();
  const Eigen::VectorXcd vec = solver.eigenvectors().col(null_index);
  Matrix m = Eigen::Map<const Matrix>(vec.data(), d, d);
  // the eigenvector carries an arbitrary complex phase; dividing by the
  // trace removes it (the physical fixed point has unit trace)
  const Complex tr = m.trace();
  if (std::abs(tr) < 1e-8)
    throw NumericalError("stationary null vector has vanishing trace");
  m /= tr;
  m = 0.5 * (m + m.adjoint()).eval();
  DensityMatrix rho = DensityMatrix::from_matrix(m, 1e-9);
  if (!rho.is_physical())
    throw NumericalError("stationary state violates physicality tolerances");
  return rho;
}

}  // namespace jcpme
