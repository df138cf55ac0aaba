#include "app.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "io.hpp"
#include "jcpme/protocol.hpp"
#include "jcpme/spectral.hpp"

namespace jcpme::tools {

namespace {

constexpr const char* kVersion = "0.1.0";

// Every physical flag is dimensionless: rates are given in units of g,
// times in units of 1/g (i.e. the flag value is t*g).  g itself sets the
// unit system and defaults to 1.
struct ModelOptions {
  double g = 1.0;
  double kappa = 8.0;
  double kappa1 = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double n_th = 0.0;
  double n_th_atom = 0.0;
  int excitations = 1;
};

struct RunOptions {
  std::optional<double> tau;  // switch time, t*g
  double t_max = 8.0;         // horizon, t*g
  int samples = 2001;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::string reference = "stationary";
};

struct AxisOptions {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 21;
};

struct SpectrumOptions {
  double g = 1.0;
  double kappa_min = 0.0;
  double kappa_max = 12.0;
  int steps = 241;
  std::string out = "-";
};

struct SimulateOptions {
  ModelOptions model;
  RunOptions run;
  std::string protocol = "two";
  std::string out = "-";
};

struct CompareOptions {
  ModelOptions model;
  RunOptions run;
  double t_star = 8.0;  // t*g
  std::string out = "-";
  std::string csv_single;
  std::string csv_two;
};

struct PhaseOptions {
  ModelOptions model;
  RunOptions run;
  AxisOptions x{"tau", 0.0, 2.0, 21};
  AxisOptions y{"delta", -1.0, 1.0, 21};
  double t_star = 8.0;  // t*g
  int workers = 0;
  std::string out = "-";
};

void require_unit_scale(double g) {
  if (!(std::isfinite(g) && g > 0.0))
    throw std::invalid_argument("g must be positive; it sets the unit system");
}

ModelParams to_params(const ModelOptions& m) {
  require_unit_scale(m.g);
  ModelParams p;
  p.g = m.g;
  p.kappa = m.kappa * m.g;
  p.kappa1 = m.kappa1 * m.g;
  p.gamma = m.gamma * m.g;
  p.delta = m.delta * m.g;
  p.n_th = m.n_th;
  p.n_th_atom = m.n_th_atom;
  p.N = m.excitations;
  p.validate();
  for (const std::string& w : p.warnings()) std::cerr << "warning: " << w << '\n';
  return p;
}

DistanceReference to_reference(const std::string& name) {
  if (name == "stationary") return DistanceReference::FinalStationary;
  if (name == "ground") return DistanceReference::GroundState;
  throw std::invalid_argument("reference must be 'stationary' or 'ground'");
}

ProtocolKind to_kind(const std::string& name) {
  if (name == "single") return ProtocolKind::SingleStep;
  if (name == "two") return ProtocolKind::TwoStep;
  throw std::invalid_argument("protocol must be 'single' or 'two'");
}

ProtocolSpec make_spec(const ModelOptions& m, const RunOptions& r,
                       ProtocolKind kind) {
  ProtocolSpec spec;
  spec.kind = kind;
  spec.model = to_params(m);
  if (r.tau) spec.tau = *r.tau / m.g;
  spec.t_max = r.t_max / m.g;
  spec.reference = to_reference(r.reference);
  spec.validate();
  return spec;
}

Tolerances to_tolerances(const RunOptions& r) { return {r.rel_tol, r.abs_tol}; }

void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--g", m.g, "Coupling rate g (sets the unit system)")
      ->capture_default_str();
  cmd->add_option("--kappa", m.kappa, "Target cavity loss rate, units of g")
      ->capture_default_str();
  cmd->add_option("--kappa1", m.kappa1,
                  "Low-loss-stage cavity rate, units of g")
      ->capture_default_str();
  cmd->add_option("--gamma", m.gamma, "Atomic decay rate, units of g")
      ->capture_default_str();
  cmd->add_option("--delta", m.delta, "Atom-cavity detuning, units of g")
      ->capture_default_str();
  cmd->add_option("--n-th", m.n_th, "Mean thermal photon number")
      ->capture_default_str();
  cmd->add_option("--n-th-atom", m.n_th_atom, "Mean thermal atomic excitation")
      ->capture_default_str();
  cmd->add_option("--excitations", m.excitations, "Excitation cap N")
      ->capture_default_str();
}

void add_run_options(CLI::App* cmd, RunOptions& r) {
  cmd->add_option("--tau", r.tau,
                  "Two-step switch time t*g; default pi/(2 sqrt(N)) in these "
                  "units");
  cmd->add_option("--t-max", r.t_max, "Horizon t*g")->capture_default_str();
  cmd->add_option("--samples", r.samples, "Uniform sample count")
      ->capture_default_str();
  cmd->add_option("--rel-tol", r.rel_tol, "Integrator relative tolerance")
      ->capture_default_str();
  cmd->add_option("--abs-tol", r.abs_tol, "Integrator absolute tolerance")
      ->capture_default_str();
  cmd->add_option("--reference", r.reference,
                  "Distance reference: stationary state of the final stage, "
                  "or the ground state")
      ->check(CLI::IsMember({"stationary", "ground"}))
      ->capture_default_str();
}

void add_axis_options(CLI::App* cmd, const std::string& prefix, AxisOptions& a) {
  cmd->add_option("--" + prefix + "-axis", a.name,
                  "Swept parameter: tau (units of its default), delta, gamma "
                  "or kappa1 (units of g)")
      ->check(CLI::IsMember({"tau", "delta", "gamma", "kappa1"}))
      ->capture_default_str();
  cmd->add_option("--" + prefix + "-min", a.min, "Axis lower bound")
      ->capture_default_str();
  cmd->add_option("--" + prefix + "-max", a.max, "Axis upper bound")
      ->capture_default_str();
  cmd->add_option("--" + prefix + "-steps", a.steps, "Axis grid points")
      ->capture_default_str();
}

void add_model_meta(Csv& csv, const ModelOptions& m) {
  csv.meta.emplace_back("g", format_number(m.g));
  csv.meta.emplace_back("kappa", format_number(m.kappa));
  csv.meta.emplace_back("kappa1", format_number(m.kappa1));
  csv.meta.emplace_back("gamma", format_number(m.gamma));
  csv.meta.emplace_back("delta", format_number(m.delta));
  csv.meta.emplace_back("n_th", format_number(m.n_th));
  csv.meta.emplace_back("n_th_atom", format_number(m.n_th_atom));
  csv.meta.emplace_back("excitations", std::to_string(m.excitations));
}

void add_run_meta(Csv& csv, const RunOptions& r, const ProtocolSpec& spec) {
  csv.meta.emplace_back("tau", format_number(spec.resolved_tau() * spec.model.g));
  csv.meta.emplace_back("t_max", format_number(r.t_max));
  csv.meta.emplace_back("samples", std::to_string(r.samples));
  csv.meta.emplace_back("reference", r.reference);
  csv.meta.emplace_back("rel_tol", format_number(r.rel_tol));
  csv.meta.emplace_back("abs_tol", format_number(r.abs_tol));
}

Csv record_csv(const RelaxationRecord& rec, const ModelOptions& m,
               const RunOptions& r, const std::string& protocol) {
  Csv csv;
  csv.meta.emplace_back("command", "simulate");
  csv.meta.emplace_back("version", kVersion);
  csv.meta.emplace_back("protocol", protocol);
  add_model_meta(csv, m);
  add_run_meta(csv, r, rec.spec);
  csv.columns = {"t", "p_e", "n_ph", "d_tr", "d_hs", "segment"};
  const double g = rec.spec.model.g;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    csv.rows.push_back({format_number(rec.times[i] * g),
                        format_number(rec.p_e[i]), format_number(rec.n_ph[i]),
                        format_number(rec.d_tr[i]), format_number(rec.d_hs[i]),
                        std::to_string(rec.segment[i])});
  }
  return csv;
}

void run_spectrum(const SpectrumOptions& o) {
  require_unit_scale(o.g);
  if (!(std::isfinite(o.kappa_min) && std::isfinite(o.kappa_max) &&
        0.0 <= o.kappa_min && o.kappa_min <= o.kappa_max))
    throw std::invalid_argument("kappa range must satisfy 0 <= min <= max");
  if (o.steps < 1 || (o.steps == 1 && o.kappa_min != o.kappa_max))
    throw std::invalid_argument("steps must be >= 2 for a non-trivial range");

  Csv csv;
  csv.meta.emplace_back("command", "spectrum");
  csv.meta.emplace_back("version", kVersion);
  csv.meta.emplace_back("g", format_number(o.g));
  csv.meta.emplace_back("kappa_min", format_number(o.kappa_min));
  csv.meta.emplace_back("kappa_max", format_number(o.kappa_max));
  csv.meta.emplace_back("steps", std::to_string(o.steps));
  csv.columns = {"kappa_over_g", "re_l1", "re_l2", "re_l3", "re_l4",
                 "im_l1", "im_l2", "im_l3", "im_l4"};
  for (double v : linspace(o.kappa_min, o.kappa_max, o.steps)) {
    const DynamicalMatrix R = build_dynamical_matrix(o.g, v * o.g);
    const std::array<Complex, 4> vals = numerical_eigenvalues(R);
    std::vector<std::string> row;
    row.reserve(9);
    row.push_back(format_number(v));
    for (const Complex& l : vals) row.push_back(format_number(l.real() / o.g));
    for (const Complex& l : vals) row.push_back(format_number(l.imag() / o.g));
    csv.rows.push_back(std::move(row));
  }
  write_text(o.out, csv.str());
}

void run_simulate(const SimulateOptions& o) {
  const ProtocolSpec spec = make_spec(o.model, o.run, to_kind(o.protocol));
  const RelaxationRecord rec =
      run_protocol(spec, o.run.samples, to_tolerances(o.run));
  write_text(o.out, record_csv(rec, o.model, o.run, o.protocol).str());
}

void run_compare(const CompareOptions& o) {
  const ProtocolSpec two = make_spec(o.model, o.run, ProtocolKind::TwoStep);
  ProtocolSpec single = two;
  single.kind = ProtocolKind::SingleStep;
  const Tolerances tol = to_tolerances(o.run);
  const RelaxationRecord rec_single = run_protocol(single, o.run.samples, tol);
  const RelaxationRecord rec_two = run_protocol(two, o.run.samples, tol);
  const MpembaVerdict verdict =
      detect_pontus_mpemba(rec_single, rec_two, o.t_star / o.model.g);

  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["effect"] = verdict.effect;
  j["t_star"] = o.t_star;
  j["d_tr_single"] = verdict.d_tr_single;
  j["d_tr_two"] = verdict.d_tr_two;
  j["margin"] = verdict.margin;
  nlohmann::ordered_json params;
  params["g"] = o.model.g;
  params["kappa"] = o.model.kappa;
  params["kappa1"] = o.model.kappa1;
  params["gamma"] = o.model.gamma;
  params["delta"] = o.model.delta;
  params["n_th"] = o.model.n_th;
  params["n_th_atom"] = o.model.n_th_atom;
  params["excitations"] = o.model.excitations;
  params["tau"] = two.resolved_tau() * o.model.g;
  params["t_max"] = o.run.t_max;
  params["samples"] = o.run.samples;
  params["reference"] = o.run.reference;
  params["rel_tol"] = o.run.rel_tol;
  params["abs_tol"] = o.run.abs_tol;
  j["params"] = std::move(params);
  write_text(o.out, j.dump(2) + "\n");

  if (!o.csv_single.empty())
    write_text(o.csv_single, record_csv(rec_single, o.model, o.run, "single").str());
  if (!o.csv_two.empty())
    write_text(o.csv_two, record_csv(rec_two, o.model, o.run, "two").str());
}

AxisSpec to_axis(const AxisOptions& a) {
  const std::optional<SweepAxis> axis = axis_from_name(a.name);
  if (!axis) throw std::invalid_argument("unknown axis name: " + a.name);
  return {*axis, a.min, a.max, a.steps};
}

void run_phase_diagram(const PhaseOptions& o) {
  const ProtocolSpec base = make_spec(o.model, o.run, ProtocolKind::TwoStep);
  const AxisSpec x = to_axis(o.x);
  const AxisSpec y = to_axis(o.y);
  const PhaseDiagram grid =
      sweep_phase_diagram(base, x, y, o.t_star / o.model.g, o.run.samples,
                          o.workers, to_tolerances(o.run));

  Csv csv;
  csv.meta.emplace_back("command", "phase-diagram");
  csv.meta.emplace_back("version", kVersion);
  add_model_meta(csv, o.model);
  csv.meta.emplace_back("tau", o.run.tau ? format_number(*o.run.tau) : "auto");
  csv.meta.emplace_back("t_max", format_number(o.run.t_max));
  csv.meta.emplace_back("t_star", format_number(o.t_star));
  csv.meta.emplace_back("samples", std::to_string(o.run.samples));
  csv.meta.emplace_back("reference", o.run.reference);
  csv.meta.emplace_back("rel_tol", format_number(o.run.rel_tol));
  csv.meta.emplace_back("abs_tol", format_number(o.run.abs_tol));
  csv.meta.emplace_back("x_axis", axis_name(x.axis));
  csv.meta.emplace_back("x_min", format_number(x.min));
  csv.meta.emplace_back("x_max", format_number(x.max));
  csv.meta.emplace_back("x_steps", std::to_string(x.steps));
  csv.meta.emplace_back("y_axis", axis_name(y.axis));
  csv.meta.emplace_back("y_min", format_number(y.min));
  csv.meta.emplace_back("y_max", format_number(y.max));
  csv.meta.emplace_back("y_steps", std::to_string(y.steps));
  csv.meta.emplace_back("row_order", "y-outer, x-inner");
  csv.columns = {"x", "y", "effect", "margin"};
  const std::size_t nx = grid.x_values.size();
  for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = iy * nx + ix;
      csv.rows.push_back({format_number(grid.x_values[ix]),
                          format_number(grid.y_values[iy]),
                          grid.effect[k] ? "1" : "0",
                          format_number(grid.margin[k])});
    }
  }
  write_text(o.out, csv.str());
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Dissipative Jaynes-Cummings simulator: loss-rate spectra, relaxation "
      "protocols, accelerated-relaxation detection, and phase diagrams"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("jcpme ") + kVersion);
  app.set_config("--config", "",
                 "Read options from a key=value file with one [section] per "
                 "subcommand; command-line flags override the file");
  app.allow_config_extras(false);

  SpectrumOptions spectrum;
  auto* cmd_spectrum = app.add_subcommand(
      "spectrum", "Scan the relaxation spectrum over a cavity-loss range");
  cmd_spectrum->fallthrough();
  cmd_spectrum->add_option("--g", spectrum.g, "Coupling rate g")
      ->capture_default_str();
  cmd_spectrum->add_option("--kappa-min", spectrum.kappa_min,
                           "Scan start, units of g")
      ->capture_default_str();
  cmd_spectrum->add_option("--kappa-max", spectrum.kappa_max,
                           "Scan end, units of g")
      ->capture_default_str();
  cmd_spectrum->add_option("--steps", spectrum.steps, "Grid points")
      ->capture_default_str();
  cmd_spectrum->add_option("--out", spectrum.out, "CSV path, or - for stdout")
      ->capture_default_str();
  cmd_spectrum->callback([&spectrum] { run_spectrum(spectrum); });

  SimulateOptions simulate;
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Run one relaxation protocol and write the time series");
  cmd_simulate->fallthrough();
  add_model_options(cmd_simulate, simulate.model);
  add_run_options(cmd_simulate, simulate.run);
  cmd_simulate->add_option("--protocol", simulate.protocol,
                           "single (direct quench) or two (low-loss stage, "
                           "then quench)")
      ->check(CLI::IsMember({"single", "two"}))
      ->capture_default_str();
  cmd_simulate->add_option("--out", simulate.out, "CSV path, or - for stdout")
      ->capture_default_str();
  cmd_simulate->callback([&simulate] { run_simulate(simulate); });

  CompareOptions compare;
  auto* cmd_compare = app.add_subcommand(
      "compare",
      "Run both protocols from the same state and compare distances at "
      "t-star");
  cmd_compare->fallthrough();
  add_model_options(cmd_compare, compare.model);
  add_run_options(cmd_compare, compare.run);
  cmd_compare->add_option("--t-star", compare.t_star, "Comparison time t*g")
      ->capture_default_str();
  cmd_compare->add_option("--out", compare.out, "JSON path, or - for stdout")
      ->capture_default_str();
  cmd_compare->add_option("--csv-single", compare.csv_single,
                          "Optional CSV path for the single-step record");
  cmd_compare->add_option("--csv-two", compare.csv_two,
                          "Optional CSV path for the two-step record");
  cmd_compare->callback([&compare] { run_compare(compare); });

  PhaseOptions phase;
  auto* cmd_phase = app.add_subcommand(
      "phase-diagram", "Sweep the comparison verdict over a parameter grid");
  cmd_phase->fallthrough();
  add_model_options(cmd_phase, phase.model);
  add_run_options(cmd_phase, phase.run);
  add_axis_options(cmd_phase, "x", phase.x);
  add_axis_options(cmd_phase, "y", phase.y);
  cmd_phase->add_option("--t-star", phase.t_star, "Comparison time t*g")
      ->capture_default_str();
  cmd_phase->add_option("--workers", phase.workers,
                        "Worker threads; 0 = JCPME_WORKERS env var, then all "
                        "cores")
      ->capture_default_str();
  cmd_phase->add_option("--out", phase.out, "CSV path, or - for stdout")
      ->capture_default_str();
  cmd_phase->callback([&phase] { run_phase_diagram(phase); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help and version requests exit cleanly; anything else is a config
    // error.
    return code == 0 ? 0 : 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace jcpme::tools
