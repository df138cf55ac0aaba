#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "jcpme/integrator.hpp"

namespace jcpme {

// SingleStep relaxes at the target loss rate from t = 0.  TwoStep holds the
// loss at kappa1 until the switch time tau, then jumps to the target rate.
enum class ProtocolKind { SingleStep, TwoStep };

// Reference state for the distance curves: the stationary state of the
// final stage, or the dark ground state (exact attractor when every decay
// channel feeds it).
enum class DistanceReference { FinalStationary, GroundState };

// Distances closer than this are treated as a tie, so equal trajectories
// never register as an effect.
inline constexpr double kTieEpsilon = 1e-9;

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::SingleStep;
  ModelParams model;
  std::optional<double> tau;               // switch time; default half Rabi period
  std::optional<double> t_max;             // horizon; default 8/g
  std::optional<DensityMatrix> initial;    // default: bare excited atom
  DistanceReference reference = DistanceReference::FinalStationary;

  // pi / (2 g sqrt(N)): the time a lossless exchange takes to move the
  // excitation fully into the photon mode.
  double default_tau() const;
  double resolved_tau() const;
  double resolved_t_max() const;
  DensityMatrix initial_state() const;
  void validate() const;
};

struct RelaxationRecord {
  std::vector<double> times;
  std::vector<double> p_e;      // excited-state population
  std::vector<double> n_ph;     // mean photon number
  std::vector<double> d_tr;     // trace distance to the reference
  std::vector<double> d_hs;     // Hilbert-Schmidt distance to the reference
  std::vector<int> segment;     // active stage per sample
  ProtocolSpec spec;
  DensityMatrix equilibrium;
  double max_trace_drift = 0.0;
};

struct MpembaVerdict {
  bool effect = false;
  double t_star = 0.0;
  double d_tr_single = 0.0;
  double d_tr_two = 0.0;
  double margin = 0.0;  // d_tr_single - d_tr_two
};

RelaxationRecord run_protocol(const ProtocolSpec& spec, int sample_count = 2001,
                              const Tolerances& tol = {});

// Compare the trace distance of the two records at t_star (linear
// interpolation between samples).  The effect holds when the two-step run
// is closer by more than kTieEpsilon.  Both records must share the model,
// the initial state and the reference, t_star must be covered by both, and
// it must lie past the two-step switch time.
MpembaVerdict detect_pontus_mpemba(const RelaxationRecord& single_step,
                                   const RelaxationRecord& two_step,
                                   double t_star);

// Sweep axes, all dimensionless: the switch time in units of its default,
// and detuning / atom decay / low-stage loss in units of g.
enum class SweepAxis { TauOverTau0, DeltaOverG, GammaOverG, Kappa1OverG };

const char* axis_name(SweepAxis axis);
std::optional<SweepAxis> axis_from_name(std::string_view name);

struct AxisSpec {
  SweepAxis axis = SweepAxis::TauOverTau0;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
};

// Row-major grid: cell (ix, iy) sits at index iy * x_values.size() + ix.
struct PhaseDiagram {
  AxisSpec x_axis, y_axis;
  std::vector<double> x_values, y_values;
  std::vector<std::uint8_t> effect;
  std::vector<double> margin;
};

// Verdict grid over two axes applied to a base two-step protocol; each cell
// runs the single-step and two-step pair and compares at t_star.  workers
// <= 0 picks the JCPME_WORKERS environment variable, then the hardware
// concurrency.  Results are deterministic regardless of thread count.
PhaseDiagram sweep_phase_diagram(const ProtocolSpec& base, const AxisSpec& x,
                                 const AxisSpec& y, double t_star,
                                 int sample_count = 2001, int workers = 0,
                                 const Tolerances& tol = {});

}  // namespace jcpme
