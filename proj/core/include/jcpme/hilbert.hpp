#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jcpme {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Thrown when an adaptive numerical routine cannot meet its accuracy
// contract (step-size underflow, unresolved eigenproblem, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Atom { g, e };

// One element of the truncated atom-cavity basis.  For excitation cap N the
// space is spanned by |g,0>..|g,N>, |e,0>..|e,N-1> in that order (dimension
// 2N+1); every state in it carries at most N total excitations.
struct BasisLabel {
  Atom atom = Atom::g;
  int photons = 0;
};

// Dimension 2N+1 of the capped space.
int basis_dimension(int N);

// Position of a label in the canonical ordering: |g,n> -> n, |e,n> -> N+1+n.
// Throws std::invalid_argument if the label is out of range for the cap.
int basis_index(const BasisLabel& label, int N);

// Inverse of basis_index.
BasisLabel basis_label(int index, int N);

// Physical rates of the lossy atom-cavity model.  `g` sets the time unit;
// `delta` is the atom-cavity detuning (either sign); `kappa1` is the cavity
// loss rate during the low-loss stage of a two-step protocol; `N` caps the
// conserved excitation number (basis dimension 2N+1).
struct ModelParams {
  double g = 1.0;
  double kappa = 0.0;
  double kappa1 = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double n_th = 0.0;
  double n_th_atom = 0.0;
  int N = 1;

  int dimension() const { return basis_dimension(N); }

  // Throws std::invalid_argument on g <= 0, negative rates or occupations,
  // or N < 1.
  void validate() const;

  // Soft diagnostics: the restricted thermal manifold assumes small
  // occupations, so values above 0.2 are flagged.
  std::vector<std::string> warnings() const;
};

// Acceptance tolerances for physical-state checks.
struct ValidityTolerances {
  double trace = 1e-9;       // |Tr(rho) - 1| bound
  double positivity = 1e-9;  // smallest eigenvalue >= -positivity
};

// Hermitian unit-trace state over the canonical basis.  Hermiticity is
// structural: construction mirrors the upper triangle into the lower one, so
// entries()[m][n] == conj(entries()[n][m]) holds exactly.
class DensityMatrix {
 public:
  // Pure basis state |label><label| in the cap-N space.
  static DensityMatrix pure(const BasisLabel& label, int N);

  // Builds from a general matrix.  The stored state is the Hermitian part
  // (upper triangle mirrored); throws std::invalid_argument if the input
  // deviates from Hermitian by more than `hermiticity_slack` in max norm.
  static DensityMatrix from_matrix(const Matrix& m,
                                   double hermiticity_slack = 1e-9);

  int dim() const { return static_cast<int>(m_.rows()); }
  int excitation_cap() const { return (dim() - 1) / 2; }
  const Matrix& entries() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  double trace_error() const;     // |Tr - 1|
  double min_eigenvalue() const;  // smallest eigenvalue of the state
  bool is_physical(const ValidityTolerances& tol = {}) const;

 private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Real packing of a Hermitian d x d matrix into d^2 numbers: the diagonal
// first, then (Re, Im) of each upper-triangle entry in row-major order.
// Integrating in this packing keeps Hermiticity exact along trajectories.
RealVector pack_hermitian(const Matrix& m);
Matrix unpack_hermitian(const RealVector& y, int dim);

// Allocation-free variants for inner loops; outputs are resized as needed.
void pack_hermitian_into(const Matrix& m, RealVector& y);
void unpack_hermitian_into(const RealVector& y, Matrix& m);

// Observables.  Both need only the canonical ordering implied by dim().
double atomic_excitation(const DensityMatrix& rho);  // sum of e-block diag
double photon_number(const DensityMatrix& rho);      // sum of n * diag

// Distance measures between same-dimension states.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double hs_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct DistancePair {
  double d_tr = 0.0;
  double d_hs = 0.0;
};
DistancePair distances(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace jcpme
