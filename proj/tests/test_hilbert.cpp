#include <cmath>
#include <random>

#include "doctest.h"
#include "jcpme/hilbert.hpp"

using namespace jcpme;

namespace {

Matrix random_hermitian(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return Matrix(0.5 * (a + a.adjoint()));
}

DensityMatrix random_state(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  Matrix m = a * a.adjoint();
  m /= m.trace().real();
  return DensityMatrix::from_matrix(m);
}

}  // namespace

TEST_CASE("basis indexing follows the ground-block-first convention") {
  CHECK(basis_dimension(1) == 3);
  CHECK(basis_dimension(4) == 9);
  CHECK_THROWS_AS(basis_dimension(0), std::invalid_argument);

  CHECK(basis_index({Atom::g, 0}, 1) == 0);
  CHECK(basis_index({Atom::e, 0}, 1) == 2);
  CHECK(basis_index({Atom::g, 2}, 2) == 2);
  CHECK(basis_index({Atom::e, 1}, 2) == 4);

  for (int N = 1; N <= 4; ++N)
    for (int i = 0; i < basis_dimension(N); ++i)
      CHECK(basis_index(basis_label(i, N), N) == i);

  CHECK_THROWS_AS(basis_index({Atom::g, 2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(basis_index({Atom::e, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(basis_index({Atom::g, -1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(basis_label(3, 1), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.kappa = 8.0;
  CHECK_NOTHROW(p.validate());
  CHECK(p.dimension() == 3);

  ModelParams q = p;
  q.kappa = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.g = -0.5;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.g = 0.0;  // uncoupled limit is a valid parameter record
  CHECK_NOTHROW(q.validate());
  q = p;
  q.N = 0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.n_th_atom = -0.1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = p;
  q.delta = std::nan("");
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);

  CHECK(p.warnings().empty());
  q = p;
  q.n_th = 0.5;
  q.n_th_atom = 0.3;
  CHECK(q.warnings().size() == 2);
}

TEST_CASE("density matrix construction and validity") {
  const DensityMatrix rho = DensityMatrix::pure({Atom::e, 0}, 1);
  CHECK(rho.dim() == 3);
  CHECK(rho.excitation_cap() == 1);
  CHECK(rho(2, 2) == Complex(1.0, 0.0));
  CHECK(rho.trace_error() == 0.0);
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rho.is_physical());

  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(0, 1) = Complex(0.0, 0.5);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), std::invalid_argument);
  m(1, 0) = Complex(0.0, -0.5);
  CHECK_NOTHROW(DensityMatrix::from_matrix(m));

  CHECK_THROWS_AS(DensityMatrix::from_matrix(Matrix::Identity(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(Matrix::Identity(1, 1)),
                  std::invalid_argument);

  // Unphysical but Hermitian inputs construct; validity is a separate check.
  Matrix bad = Matrix::Zero(3, 3);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  const DensityMatrix rho_bad = DensityMatrix::from_matrix(bad);
  CHECK_FALSE(rho_bad.is_physical());
}

TEST_CASE("hermitian packing roundtrip") {
  for (int dim : {3, 5, 9}) {
    const Matrix m = random_hermitian(dim, 17u + static_cast<unsigned>(dim));
    const RealVector y = pack_hermitian(m);
    CHECK(y.size() == dim * dim);
    const Matrix back = unpack_hermitian(y, dim);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back - back.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  RealVector y(9);
  y.setZero();
  CHECK_THROWS_AS(unpack_hermitian(y, 4), std::invalid_argument);
}

TEST_CASE("observables on basis states") {
  for (int N : {1, 2, 3}) {
    for (int n = 0; n <= N; ++n) {
      const DensityMatrix rho = DensityMatrix::pure({Atom::g, n}, N);
      CHECK(atomic_excitation(rho) == doctest::Approx(0.0));
      CHECK(photon_number(rho) == doctest::Approx(double(n)));
    }
    for (int n = 0; n < N; ++n) {
      const DensityMatrix rho = DensityMatrix::pure({Atom::e, n}, N);
      CHECK(atomic_excitation(rho) == doctest::Approx(1.0));
      CHECK(photon_number(rho) == doctest::Approx(double(n)));
    }
  }
}

TEST_CASE("distances: known values, symmetry, triangle inequality") {
  const DensityMatrix e0 = DensityMatrix::pure({Atom::e, 0}, 1);
  const DensityMatrix g0 = DensityMatrix::pure({Atom::g, 0}, 1);
  CHECK(trace_distance(e0, g0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hs_distance(e0, g0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(trace_distance(e0, e0) == 0.0);

  // Commuting diagonal states: D_tr = |a - b| exactly.
  Matrix ma = Matrix::Zero(3, 3), mb = Matrix::Zero(3, 3);
  ma(0, 0) = 0.7;
  ma(2, 2) = 0.3;
  mb(0, 0) = 0.45;
  mb(2, 2) = 0.55;
  const DensityMatrix a = DensityMatrix::from_matrix(ma);
  const DensityMatrix b = DensityMatrix::from_matrix(mb);
  CHECK(trace_distance(a, b) == doctest::Approx(0.25).epsilon(1e-12));

  const DensityMatrix x = random_state(3, 3u);
  const DensityMatrix y = random_state(3, 4u);
  const DensityMatrix z = random_state(3, 5u);
  CHECK(trace_distance(x, y) == doctest::Approx(trace_distance(y, x)));
  CHECK(trace_distance(x, z) <=
        trace_distance(x, y) + trace_distance(y, z) + 1e-12);
  CHECK(hs_distance(x, z) <= hs_distance(x, y) + hs_distance(y, z) + 1e-12);

  const DistancePair d = distances(x, y);
  CHECK(d.d_tr == doctest::Approx(trace_distance(x, y)));
  CHECK(d.d_hs == doctest::Approx(hs_distance(x, y)));
  // Both vanish only for equal states.
  CHECK(d.d_tr > 1e-3);

  CHECK_THROWS_AS(trace_distance(x, random_state(5, 6u)),
                  std::invalid_argument);
}
