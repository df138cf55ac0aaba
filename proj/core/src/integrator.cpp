#include "jcpme/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jcpme/protocol.hpp"

namespace jcpme {

namespace {

// Dormand-Prince 5(4) coefficients.  The first-same-as-last property lets an
// accepted step reuse its final derivative as the next step's first stage.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order solutions.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kMinScale = 0.2;
constexpr double kMaxScale = 5.0;
constexpr double kSafety = 0.9;
constexpr double kRenormThreshold = 1e-12;

double step_scale(double err) {
  if (err <= 1e-300) return kMaxScale;
  return std::clamp(kSafety * std::pow(err, -0.2), kMinScale, kMaxScale);
}

double initial_step(const ModelParams& p, double span) {
  const double rate = std::max({p.g, p.kappa, p.gamma, std::abs(p.delta),
                                1e-6});
  return std::min(0.1 / rate, span);
}

struct PackedRhs {
  const Generator* gen;
  Matrix rho, drho;

  void operator()(const RealVector& y, RealVector& f) {
    unpack_hermitian_into(y, rho);
    gen->apply(rho, drho);
    pack_hermitian_into(drho, f);
  }
};

}  // namespace

void QuenchSchedule::validate() const {
  if (segments.empty())
    throw std::invalid_argument("schedule needs at least one stage");
  if (segments.front().t_start != 0.0)
    throw std::invalid_argument("first stage must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!std::isfinite(s.t_start))
      throw std::invalid_argument("stage start time must be finite");
    if (i > 0 && !(s.t_start > segments[i - 1].t_start))
      throw std::invalid_argument("stage start times must strictly increase");
    s.params.validate();
    if (s.params.N != segments.front().params.N)
      throw std::invalid_argument("all stages must share the excitation cap");
  }
  if (!(std::isfinite(t_max) && t_max > segments.back().t_start))
    throw std::invalid_argument("t_max must exceed the last stage start");
}

int QuenchSchedule::segment_index_at(double t) const {
  if (!(t >= 0.0))
    throw std::invalid_argument("time must be non-negative");
  int idx = 0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].t_start <= t) idx = static_cast<int>(i);
  }
  return idx;
}

std::vector<double> linspace(double a, double b, int count) {
  if (count < 1) throw std::invalid_argument("linspace needs count >= 1");
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw std::invalid_argument("linspace endpoints must be finite");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = a;
    return out;
  }
  const double step = (b - a) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = a + step * i;
  out.back() = b;
  return out;
}

Trajectory integrate(GeneratorKind kind, const DensityMatrix& rho0,
                     const QuenchSchedule& schedule,
                     const std::vector<double>& sample_times,
                     const Tolerances& tol) {
  schedule.validate();
  if (!(std::isfinite(tol.rel) && tol.rel > 0.0 && std::isfinite(tol.abs) &&
        tol.abs > 0.0))
    throw std::invalid_argument("tolerances must be positive and finite");
  const int dim = schedule.segments.front().params.dimension();
  if (rho0.dim() != dim)
    throw std::invalid_argument("initial state dimension does not match model");
  if (!rho0.is_physical())
    throw std::invalid_argument("initial state is not a valid density matrix");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double s = sample_times[i];
    if (!(std::isfinite(s) && s >= 0.0 && s <= schedule.t_max))
      throw std::invalid_argument("sample times must lie within [0, t_max]");
    if (i > 0 && s < sample_times[i - 1])
      throw std::invalid_argument("sample times must be non-decreasing");
  }

  Trajectory traj;
  traj.times.reserve(sample_times.size());
  traj.states.reserve(sample_times.size());
  traj.params_at.reserve(sample_times.size());

  const int n = dim * dim;
  RealVector y = pack_hermitian(rho0.entries());
  RealVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  RealVector ytmp(n), y5(n), errv(n);
  Matrix sample(dim, dim);

  double t = 0.0;
  std::size_t si = 0;

  auto record_due = [&](int seg_idx) {
    while (si < sample_times.size() && sample_times[si] <= t) {
      unpack_hermitian_into(y, sample);
      const double tr = sample.trace().real();
      const double drift = std::abs(tr - 1.0);
      traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
      if (drift > kRenormThreshold) sample /= tr;
      traj.times.push_back(sample_times[si]);
      traj.states.push_back(DensityMatrix::from_matrix(sample));
      traj.params_at.push_back(seg_idx);
      ++si;
    }
  };

  const std::size_t n_seg = schedule.segments.size();
  for (std::size_t seg = 0; seg < n_seg; ++seg) {
    const Segment& segment = schedule.segments[seg];
    const double t_end = seg + 1 < n_seg ? schedule.segments[seg + 1].t_start
                                         : schedule.t_max;
    record_due(static_cast<int>(seg));
    if (!(t < t_end)) continue;

    Generator gen(kind, segment.params);
    PackedRhs rhs{&gen, Matrix(dim, dim), Matrix(dim, dim)};
    rhs(y, k1);
    double h = initial_step(segment.params, t_end - t);
    const double h_min =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(t_end, 1.0);

    while (t < t_end) {
      const double t_goal =
          (si < sample_times.size() && sample_times[si] < t_end)
              ? sample_times[si]
              : t_end;
      const double h_prop = h;
      bool clamped = false;
      if (t + h >= t_goal) {
        h = t_goal - t;
        clamped = true;
      }

      ytmp = y + h * (a21 * k1);
      rhs(ytmp, k2);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      rhs(ytmp, k3);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(ytmp, k4);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(ytmp, k5);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(ytmp, k6);
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(y5, k7);
      errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        const double sc =
            tol.abs + tol.rel * std::max(std::abs(y(i)), std::abs(y5(i)));
        const double e = errv(i) / sc;
        err += e * e;
      }
      err = std::sqrt(err / n);

      if (err <= 1.0) {
        ++traj.steps_accepted;
        t = clamped ? t_goal : t + h;
        y.swap(y5);
        k1.swap(k7);
        const double grown = h * step_scale(err);
        h = clamped ? std::max(h_prop, grown) : grown;
        if (t < t_end) record_due(static_cast<int>(seg));
      } else {
        ++traj.steps_rejected;
        h *= std::min(step_scale(err), 1.0);
        if (h < h_min)
          throw NumericalError(
              "step size underflow; the requested tolerances cannot be met");
      }
    }
  }

  record_due(static_cast<int>(n_seg) - 1);
  return traj;
}

QuenchSchedule make_schedule(const ProtocolSpec& protocol) {
  protocol.validate();
  const double t_max = protocol.resolved_t_max();

  QuenchSchedule schedule;
  schedule.t_max = t_max;
  ModelParams target = protocol.model;

  if (protocol.kind == ProtocolKind::SingleStep) {
    schedule.segments.push_back({0.0, target});
    return schedule;
  }

  const double tau = protocol.resolved_tau();
  if (tau == 0.0) {
    schedule.segments.push_back({0.0, target});
    return schedule;
  }
  ModelParams low = protocol.model;
  low.kappa = protocol.model.kappa1;
  schedule.segments.push_back({0.0, low});
  schedule.segments.push_back({tau, target});
  return schedule;
}

}  // namespace jcpme
