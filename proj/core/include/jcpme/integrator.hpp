#pragma once

#include <vector>

#include "jcpme/liouvillian.hpp"

namespace jcpme {

struct ProtocolSpec;

// One piecewise-constant stage of a quench.  The active loss rate of a
// stage is params.kappa; schedules built from a two-step protocol put the
// low-loss value there for the first stage.
struct Segment {
  double t_start = 0.0;
  ModelParams params;
};

struct QuenchSchedule {
  std::vector<Segment> segments;
  double t_max = 0.0;

  void validate() const;
  // Index of the stage governing time t; a boundary belongs to the stage
  // that starts there.
  int segment_index_at(double t) const;
};

struct Tolerances {
  double rel = 1e-8;
  double abs = 1e-10;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<int> params_at;     // stage index per sample
  double max_trace_drift = 0.0;   // worst |Tr - 1| seen at any sample
  long steps_accepted = 0;
  long steps_rejected = 0;
};

// Adaptive embedded Runge-Kutta 5(4) propagation of the master equation in
// the Hermitian real packing.  Steps never cross a sample time or a stage
// boundary; sampled states are trace-renormalized when the drift exceeds
// 1e-12, and the worst drift is reported.
Trajectory integrate(GeneratorKind kind, const DensityMatrix& rho0,
                     const QuenchSchedule& schedule,
                     const std::vector<double>& sample_times,
                     const Tolerances& tol = {});

// Schedule for a relaxation protocol: one stage at the target loss rate, or
// low-loss stage [0, tau) followed by the target stage [tau, t_max).  A
// two-step protocol with tau = 0 collapses to the single stage.
QuenchSchedule make_schedule(const ProtocolSpec& protocol);

// count evenly spaced values covering [a, b] inclusive.
std::vector<double> linspace(double a, double b, int count);

}  // namespace jcpme
