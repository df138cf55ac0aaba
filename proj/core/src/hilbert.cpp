#include "jcpme/hilbert.hpp"

#include <cmath>

namespace jcpme {

int basis_dimension(int N) {
  if (N < 1) throw std::invalid_argument("excitation cap N must be >= 1");
  return 2 * N + 1;
}

int basis_index(const BasisLabel& label, int N) {
  basis_dimension(N);
  if (label.photons < 0) throw std::invalid_argument("negative photon number");
  if (label.atom == Atom::g) {
    if (label.photons > N)
      throw std::invalid_argument("|g,n> requires n <= N");
    return label.photons;
  }
  if (label.photons > N - 1)
    throw std::invalid_argument("|e,n> requires n <= N-1");
  return N + 1 + label.photons;
}

BasisLabel basis_label(int index, int N) {
  const int dim = basis_dimension(N);
  if (index < 0 || index >= dim)
    throw std::invalid_argument("basis index out of range");
  if (index <= N) return {Atom::g, index};
  return {Atom::e, index - (N + 1)};
}

void ModelParams::validate() const {
  // g = 0 is allowed here (uncoupled detailed-balance limit); layers that
  // divide by g enforce positivity themselves.
  if (!(g >= 0.0)) throw std::invalid_argument("coupling g must be >= 0");
  if (kappa < 0.0 || kappa1 < 0.0 || gamma < 0.0)
    throw std::invalid_argument("loss rates must be >= 0");
  if (n_th < 0.0 || n_th_atom < 0.0)
    throw std::invalid_argument("thermal occupations must be >= 0");
  if (N < 1) throw std::invalid_argument("excitation cap N must be >= 1");
  if (!std::isfinite(g) || !std::isfinite(kappa) || !std::isfinite(kappa1) ||
      !std::isfinite(gamma) || !std::isfinite(delta) || !std::isfinite(n_th) ||
      !std::isfinite(n_th_atom))
    throw std::invalid_argument("model parameters must be finite");
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (n_th > 0.2)
    out.push_back("n_th = " + std::to_string(n_th) +
                  " exceeds 0.2; the restricted thermal manifold assumes "
                  "small occupations");
  if (n_th_atom > 0.2)
    out.push_back("n_th_atom = " + std::to_string(n_th_atom) +
                  " exceeds 0.2; the restricted thermal manifold assumes "
                  "small occupations");
  return out;
}

namespace {

Matrix hermitian_part(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  Matrix h(d, d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = Complex(m(i, i).real(), 0.0);
    for (int j = i + 1; j < d; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

}  // namespace

DensityMatrix DensityMatrix::pure(const BasisLabel& label, int N) {
  const int d = basis_dimension(N);
  Matrix m = Matrix::Zero(d, d);
  m(basis_index(label, N), basis_index(label, N)) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m,
                                         double hermiticity_slack) {
  if (m.rows() != m.cols() || m.rows() < 3 || m.rows() % 2 == 0)
    throw std::invalid_argument(
        "density matrix must be square with odd dimension >= 3");
  const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (residual > hermiticity_slack)
    throw std::invalid_argument("matrix is not Hermitian (residual " +
                                std::to_string(residual) + ")");
  return DensityMatrix(hermitian_part(m));
}

double DensityMatrix::trace_error() const {
  return std::abs(m_.trace() - Complex(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(const ValidityTolerances& tol) const {
  return trace_error() <= tol.trace && min_eigenvalue() >= -tol.positivity;
}

void pack_hermitian_into(const Matrix& m, RealVector& y) {
  const int d = static_cast<int>(m.rows());
  y.resize(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) y(k++) = m(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      y(k++) = m(i, j).real();
      y(k++) = m(i, j).imag();
    }
}

void unpack_hermitian_into(const RealVector& y, Matrix& m) {
  const int dim = static_cast<int>(std::lround(std::sqrt(double(y.size()))));
  if (y.size() != dim * dim)
    throw std::invalid_argument("packed vector size is not a perfect square");
  m.resize(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) m(i, i) = Complex(y(k++), 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Complex v(y(k), y(k + 1));
      k += 2;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
}

RealVector pack_hermitian(const Matrix& m) {
  RealVector y;
  pack_hermitian_into(m, y);
  return y;
}

Matrix unpack_hermitian(const RealVector& y, int dim) {
  if (y.size() != dim * dim)
    throw std::invalid_argument("packed vector size does not match dimension");
  Matrix m;
  unpack_hermitian_into(y, m);
  return m;
}

double atomic_excitation(const DensityMatrix& rho) {
  const int N = rho.excitation_cap();
  double sum = 0.0;
  for (int n = 0; n < N; ++n) sum += rho(N + 1 + n, N + 1 + n).real();
  return sum;
}

double photon_number(const DensityMatrix& rho) {
  const int N = rho.excitation_cap();
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) sum += n * rho(n, n).real();
  for (int n = 1; n < N; ++n) sum += n * rho(N + 1 + n, N + 1 + n).real();
  return sum;
}

namespace {

void check_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("dimension mismatch between states");
}

}  // namespace

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dim(rho, sigma);
  const Matrix diff = rho.entries() - sigma.entries();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dim(rho, sigma);
  return (rho.entries() - sigma.entries()).norm();
}

DistancePair distances(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return {trace_distance(rho, sigma), hs_distance(rho, sigma)};
}

}  // namespace jcpme
