#include "jcpme/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace jcpme {

namespace {

double interp_at(const std::vector<double>& times,
                 const std::vector<double>& values, double t) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("record has no usable samples");
  if (t < times.front() || t > times.back())
    throw std::invalid_argument("query time lies outside the sampled range");
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.front();
  if (it == times.end()) return values.back();
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  if (span <= 0.0) return values[lo];
  const double w = (t - times[lo]) / span;
  return (1.0 - w) * values[lo] + w * values[hi];
}

DensityMatrix equilibrium_for(const ProtocolSpec& spec) {
  if (spec.reference == DistanceReference::GroundState)
    return DensityMatrix::pure({Atom::g, 0}, spec.model.N);
  return stationary_state(select_generator_kind(spec.model), spec.model);
}

RelaxationRecord run_with(const ProtocolSpec& spec, int sample_count,
                          const Tolerances& tol,
                          const DensityMatrix& equilibrium) {
  if (sample_count < 2)
    throw std::invalid_argument("sample_count must be at least 2");
  const GeneratorKind kind = select_generator_kind(spec.model);
  const QuenchSchedule schedule = make_schedule(spec);
  const std::vector<double> samples =
      linspace(0.0, schedule.t_max, sample_count);
  const DensityMatrix rho0 = spec.initial_state();
  Trajectory traj = integrate(kind, rho0, schedule, samples, tol);

  RelaxationRecord rec{{}, {}, {}, {}, {}, {},
                       spec, equilibrium, traj.max_trace_drift};
  const std::size_t n = traj.states.size();
  rec.times = std::move(traj.times);
  rec.segment = std::move(traj.params_at);
  rec.p_e.reserve(n);
  rec.n_ph.reserve(n);
  rec.d_tr.reserve(n);
  rec.d_hs.reserve(n);
  for (const DensityMatrix& state : traj.states) {
    rec.p_e.push_back(atomic_excitation(state));
    rec.n_ph.push_back(photon_number(state));
    const DistancePair d = distances(state, equilibrium);
    rec.d_tr.push_back(d.d_tr);
    rec.d_hs.push_back(d.d_hs);
  }
  return rec;
}

void apply_axis(SweepAxis axis, double value, ProtocolSpec& spec) {
  switch (axis) {
    case SweepAxis::TauOverTau0:
      spec.tau = value * spec.default_tau();
      break;
    case SweepAxis::DeltaOverG:
      spec.model.delta = value * spec.model.g;
      break;
    case SweepAxis::GammaOverG:
      spec.model.gamma = value * spec.model.g;
      break;
    case SweepAxis::Kappa1OverG:
      spec.model.kappa1 = value * spec.model.g;
      break;
  }
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("JCPME_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1)
      throw std::invalid_argument(
          "JCPME_WORKERS must be a positive integer");
    return static_cast<int>(parsed);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void check_axis(const AxisSpec& a) {
  if (!(std::isfinite(a.min) && std::isfinite(a.max) && a.min <= a.max))
    throw std::invalid_argument("axis range must be finite with min <= max");
  if (a.steps < 1) throw std::invalid_argument("axis needs at least one step");
  if (a.steps == 1 && a.min != a.max)
    throw std::invalid_argument("a single-step axis needs min == max");
}

}  // namespace

double ProtocolSpec::default_tau() const {
  return std::numbers::pi / (2.0 * model.g * std::sqrt(double(model.N)));
}

double ProtocolSpec::resolved_tau() const { return tau.value_or(default_tau()); }

double ProtocolSpec::resolved_t_max() const {
  return t_max.value_or(8.0 / model.g);
}

DensityMatrix ProtocolSpec::initial_state() const {
  if (initial) return *initial;
  return DensityMatrix::pure({Atom::e, model.N - 1}, model.N);
}

void ProtocolSpec::validate() const {
  model.validate();
  if (!(model.g > 0.0))
    throw std::invalid_argument("protocols require a positive coupling g");
  const double horizon = resolved_t_max();
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw std::invalid_argument("t_max must be positive and finite");
  if (tau && !(std::isfinite(*tau) && *tau >= 0.0))
    throw std::invalid_argument("tau must be non-negative and finite");
  if (kind == ProtocolKind::TwoStep || tau) {
    if (!(resolved_tau() < horizon))
      throw std::invalid_argument("tau must be smaller than t_max");
  }
  if (initial) {
    if (initial->dim() != model.dimension())
      throw std::invalid_argument(
          "initial state dimension does not match the model");
    if (!initial->is_physical())
      throw std::invalid_argument("initial state is not a valid density matrix");
  }
}

RelaxationRecord run_protocol(const ProtocolSpec& spec, int sample_count,
                              const Tolerances& tol) {
  spec.validate();
  return run_with(spec, sample_count, tol, equilibrium_for(spec));
}

MpembaVerdict detect_pontus_mpemba(const RelaxationRecord& single_step,
                                   const RelaxationRecord& two_step,
                                   double t_star) {
  if (single_step.spec.kind != ProtocolKind::SingleStep ||
      two_step.spec.kind != ProtocolKind::TwoStep)
    throw std::invalid_argument(
        "detect needs a single-step record and a two-step record");
  const ModelParams& a = single_step.spec.model;
  const ModelParams& b = two_step.spec.model;
  const bool same = a.g == b.g && a.kappa == b.kappa && a.gamma == b.gamma &&
                    a.delta == b.delta && a.n_th == b.n_th &&
                    a.n_th_atom == b.n_th_atom && a.N == b.N;
  if (!same)
    throw std::invalid_argument("records were produced from different models");
  const auto max_abs_diff = [](const DensityMatrix& x, const DensityMatrix& y) {
    return (x.entries() - y.entries()).cwiseAbs().maxCoeff();
  };
  if (single_step.spec.initial_state().dim() != two_step.spec.initial_state().dim() ||
      max_abs_diff(single_step.spec.initial_state(),
                   two_step.spec.initial_state()) > 1e-12)
    throw std::invalid_argument("records start from different states");
  if (single_step.equilibrium.dim() != two_step.equilibrium.dim() ||
      max_abs_diff(single_step.equilibrium, two_step.equilibrium) > 1e-12)
    throw std::invalid_argument("records use different reference states");
  if (!std::isfinite(t_star))
    throw std::invalid_argument("t_star must be finite");
  if (!(t_star > two_step.spec.resolved_tau()))
    throw std::invalid_argument("t_star must lie past the switch time");

  MpembaVerdict verdict;
  verdict.t_star = t_star;
  verdict.d_tr_single = interp_at(single_step.times, single_step.d_tr, t_star);
  verdict.d_tr_two = interp_at(two_step.times, two_step.d_tr, t_star);
  verdict.margin = verdict.d_tr_single - verdict.d_tr_two;
  verdict.effect = verdict.d_tr_two < verdict.d_tr_single - kTieEpsilon;
  return verdict;
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::TauOverTau0: return "tau";
    case SweepAxis::DeltaOverG: return "delta";
    case SweepAxis::GammaOverG: return "gamma";
    case SweepAxis::Kappa1OverG: return "kappa1";
  }
  return "unknown";
}

std::optional<SweepAxis> axis_from_name(std::string_view name) {
  if (name == "tau") return SweepAxis::TauOverTau0;
  if (name == "delta") return SweepAxis::DeltaOverG;
  if (name == "gamma") return SweepAxis::GammaOverG;
  if (name == "kappa1") return SweepAxis::Kappa1OverG;
  return std::nullopt;
}

PhaseDiagram sweep_phase_diagram(const ProtocolSpec& base, const AxisSpec& x,
                                 const AxisSpec& y, double t_star,
                                 int sample_count, int workers,
                                 const Tolerances& tol) {
  check_axis(x);
  check_axis(y);
  if (x.axis == y.axis)
    throw std::invalid_argument("sweep axes must differ");
  if (!(std::isfinite(t_star) && t_star > 0.0))
    throw std::invalid_argument("t_star must be positive and finite");
  if (sample_count < 2)
    throw std::invalid_argument("sample_count must be at least 2");

  PhaseDiagram grid;
  grid.x_axis = x;
  grid.y_axis = y;
  grid.x_values = linspace(x.min, x.max, x.steps);
  grid.y_values = linspace(y.min, y.max, y.steps);
  const std::size_t nx = grid.x_values.size();
  const std::size_t total = nx * grid.y_values.size();
  grid.effect.assign(total, 0);
  grid.margin.assign(total, 0.0);

  auto run_cell = [&](std::size_t k) {
    ProtocolSpec two = base;
    two.kind = ProtocolKind::TwoStep;
    apply_axis(x.axis, grid.x_values[k % nx], two);
    apply_axis(y.axis, grid.y_values[k / nx], two);
    two.validate();
    ProtocolSpec single = two;
    single.kind = ProtocolKind::SingleStep;
    // One equilibrium solve per cell; the final stage is common to the pair.
    const DensityMatrix eq = equilibrium_for(two);
    const RelaxationRecord rec_single = run_with(single, sample_count, tol, eq);
    const RelaxationRecord rec_two = run_with(two, sample_count, tol, eq);
    const MpembaVerdict v = detect_pontus_mpemba(rec_single, rec_two, t_star);
    grid.effect[k] = v.effect ? 1 : 0;
    grid.margin[k] = v.margin;
  };

  const int n_workers =
      std::min<long>(resolve_workers(workers), static_cast<long>(total));
  if (n_workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) run_cell(k);
    return grid;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        run_cell(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return grid;
}

}  // namespace jcpme
