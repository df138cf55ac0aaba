#pragma once

#include "jcpme/hilbert.hpp"

namespace jcpme {

// The three right-hand-side families.  SingleExcitation is the explicit
// three-state sector (one shared excitation, zero temperature); NManifold is
// the general capped ladder at zero temperature; ThermalRestricted adds
// small thermal occupations on the three-state sector.
enum class GeneratorKind { SingleExcitation, NManifold, ThermalRestricted };

// drho/dt for a 3x3 state in the canonical ordering (|g,0>, |g,1>, |e,0>).
// Requires p.N == 1 and zero thermal occupations.
Matrix rhs_single_excitation(const Matrix& rho, const ModelParams& p);

// drho/dt for a (2N+1)-dimensional state; zero thermal occupations.
// Ladder terms whose indices leave the capped ranges are dropped.
Matrix rhs_n_manifold(const Matrix& rho, const ModelParams& p);

// drho/dt for the thermal three-state sector, including the upward rates
// kappa*n_th and gamma*n_th_atom out of the ground state.
Matrix rhs_thermal(const Matrix& rho, const ModelParams& p);

// A validated (kind, params) pair with an allocation-free apply(); the hot
// path of the integrator.  Pure: safe to share across threads.
class Generator {
 public:
  Generator(GeneratorKind kind, const ModelParams& p);

  GeneratorKind kind() const { return kind_; }
  const ModelParams& params() const { return p_; }
  int dim() const { return dim_; }

  void apply(const Matrix& rho, Matrix& drho) const;
  Matrix apply(const Matrix& rho) const;

 private:
  GeneratorKind kind_;
  ModelParams p_;
  int dim_;
};

// Matrix of the generator acting on the column-stacked state, dimension
// d^2 x d^2 with d = 2N+1.  Column j holds the stacked derivative of the
// j-th elementary matrix.
using GeneratorMatrix = Eigen::MatrixXcd;
GeneratorMatrix generator_matrix(const Generator& gen);

// Unit-trace Hermitian null vector of the generator, found by dense
// eigendecomposition (smallest-modulus eigenvalue, required < 1e-10 max|l|).
// Throws std::invalid_argument when the null space is degenerate (all decay
// channels off) and NumericalError when no null eigenvalue resolves.
DensityMatrix stationary_state(GeneratorKind kind, const ModelParams& p);

// Family appropriate for the parameter record: NManifold for N >= 2,
// ThermalRestricted for nonzero occupations (N == 1 only), else
// SingleExcitation.
GeneratorKind select_generator_kind(const ModelParams& p);

}  // namespace jcpme
