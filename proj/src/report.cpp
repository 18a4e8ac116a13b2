#include "msi/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "msi/errors.hpp"

namespace msi {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double hz(double omega) { return omega / two_pi; }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

class Csv {
 public:
  explicit Csv(std::string header) : text_(std::move(header) + "\n") {}

  Csv& cell(double v) { return raw(format_double(v)); }
  Csv& cell(bool v) { return raw(v ? "true" : "false"); }
  Csv& cell(int v) { return raw(std::to_string(v)); }
  Csv& cell(const std::string& v) { return raw(v); }
  void end() {
    text_ += '\n';
    first_ = true;
  }
  const std::string& text() const { return text_; }

 private:
  Csv& raw(const std::string& s) {
    if (!first_) text_ += ',';
    text_ += s;
    first_ = false;
    return *this;
  }
  std::string text_;
  bool first_ = true;
};

struct Context {
  const ModelConfig& config;
  Scenario scenario;
  std::optional<OperatingState> state;
  Json summary;
  std::vector<std::string> warnings;
};

// Scalars every summary carries. Values that need the configured operating
// point are null when it cannot be evaluated.
void base_summary(Context& ctx, const std::string& command) {
  Json& j = ctx.summary;
  j["tool"] = "msi-optomech";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["topology"] = to_string(ctx.scenario.topology);

  const MirrorSpec mirror = MirrorSpec::from_power_reflectivity(ctx.scenario.reflectivity);
  const double g0tau = ctx.scenario.gamma0 * ctx.scenario.round_trip();
  j["epsilon_opt"] = epsilon_opt(mirror, g0tau);
  j["epsilon_max"] = epsilon_max(mirror, g0tau);

  double eps = kNaN, wM = kNaN, kM = kNaN, wsq = kNaN, gsq = kNaN, sep = kNaN, n_T = kNaN;
  try {
    eps = resolved_epsilon(ctx.scenario);
    ctx.state = evaluate(ctx.scenario);
    const System& sys = ctx.state->system;
    wM = sys.mod.omega_M;
    kM = sys.mod.kappa_M;
    const SqueezeFeatures f = squeeze_features(sys);
    wsq = f.omega_sq;
    gsq = f.Gamma_sq;
    sep = f.separation;
    n_T = occupancy(*ctx.state).n_T;
    for (const std::string& w : ctx.state->warnings()) ctx.warnings.push_back(w);
  } catch (const Error& e) {
    ctx.warnings.push_back(std::string("configured operating point: ") + e.what());
  }
  j["epsilon"] = number_or_null(eps);
  j["omega_M_Hz"] = number_or_null(hz(wM));
  j["kappa_M_Hz"] = number_or_null(hz(kM));
  j["omega_sq_Hz"] = number_or_null(hz(wsq));
  j["Gamma_sq_Hz"] = number_or_null(hz(gsq));
  j["separation"] = number_or_null(sep);
  j["n_T"] = number_or_null(n_T);
  j["min_n_T"] = number_or_null(n_T);
}

const OperatingState& require_state(const Context& ctx) {
  if (!ctx.state) {
    // Re-run to surface the original error to the caller.
    (void)evaluate(ctx.scenario);
  }
  return *ctx.state;
}

void write_outputs(const std::filesystem::path& dir, const std::string& stem, const Csv& csv,
                   Context& ctx) {
  ctx.summary["warnings"] = ctx.warnings;
  ctx.summary["config"] = echo_config(ctx.config);
  write_atomic(dir / (stem + ".csv"), csv.text());
  write_atomic(dir / (stem + ".json"), ctx.summary.dump(2) + "\n");
}

void run_couplings(Context& ctx, const std::filesystem::path& dir) {
  const MirrorSpec mirror = MirrorSpec::from_power_reflectivity(ctx.scenario.reflectivity);
  const double top = epsilon_max(mirror, ctx.scenario.gamma0 * ctx.scenario.round_trip());
  std::vector<double> grid;
  for (int i = 0; i * ctx.config.epsilon_step < top; ++i) grid.push_back(i * ctx.config.epsilon_step);
  grid.push_back(top);

  Csv csv("epsilon,T_msi,xi_per_m,eta_per_m,X,H,omega_M_Hz,kappa_M_Hz");
  int unstable = 0;
  for (double eps : grid) {
    Scenario s = ctx.scenario;
    s.epsilon_mode = EpsilonMode::fixed;
    s.epsilon = eps;
    double T = kNaN, xi = kNaN, eta = kNaN, X = kNaN, H = kNaN, wM = kNaN, kM = kNaN;
    try {
      const OperatingState st = evaluate(s);
      T = st.transmission;
      xi = st.couplings.xi;
      eta = st.couplings.eta;
      X = st.nc.X;
      H = st.nc.H;
      wM = hz(st.system.mod.omega_M);
      kM = hz(st.system.mod.kappa_M);
    } catch (const Error&) {
      ++unstable;
    }
    csv.cell(eps).cell(T).cell(xi).cell(eta).cell(X).cell(H).cell(wM).cell(kM).end();
  }
  ctx.summary["points"] = static_cast<int>(grid.size());
  ctx.summary["failed_points"] = unstable;
  write_outputs(dir, "couplings", csv, ctx);
}

void run_cooling(Context& ctx, const std::filesystem::path& dir) {
  const SweepSpec sweep = gamma0_sweep(ctx.config);
  Json curves = Json::object();
  double best = kNaN;
  for (Topology top : {Topology::srm, Topology::prm}) {
    for (bool tuned : {false, true}) {
      Scenario s = ctx.scenario;
      s.topology = top;
      if (!tuned) {
        s.reflectivity = ctx.config.baseline_reflectivity;
        s.epsilon_mode = EpsilonMode::fixed;
        s.epsilon = 0.0;
      }
      const CoolingCurve curve = cooling_sweep(s, sweep);
      const std::string top_name = top == Topology::srm ? "srm" : "prm";
      const std::string name = "cooling_" + top_name + (tuned ? "_tuned" : "_baseline");

      Csv csv("gamma0_Hz,n_T,kappa_M_Hz,stable");
      int stable = 0;
      for (const CoolingPoint& p : curve.points) {
        csv.cell(hz(p.gamma0)).cell(p.n_T).cell(hz(p.kappa_M)).cell(p.stable).end();
        stable += p.stable;
      }
      write_atomic(dir / (name + ".csv"), csv.text());

      Json c;
      c["reflectivity"] = s.reflectivity;
      c["stable_points"] = stable;
      c["points"] = static_cast<int>(curve.points.size());
      const int i = curve.minimum();
      c["min_n_T"] = i < 0 ? Json(nullptr) : Json(curve.points[i].n_T);
      c["gamma0_at_min_Hz"] = i < 0 ? Json(nullptr) : Json(hz(curve.points[i].gamma0));
      curves[name] = c;
      if (tuned && i >= 0 && !(curve.points[i].n_T >= best)) best = curve.points[i].n_T;
    }
  }
  ctx.summary["min_n_T"] = number_or_null(best);
  ctx.summary["curves"] = curves;
  ctx.summary["warnings"] = ctx.warnings;
  ctx.summary["config"] = echo_config(ctx.config);
  write_atomic(dir / "cooling_curve.json", ctx.summary.dump(2) + "\n");
}

void run_qrpn_budget(Context& ctx, const std::filesystem::path& dir) {
  const OperatingState& st = require_state(ctx);
  const System& sys = st.system;
  const double theta = homodyne_angle(ctx.config, st.nc, 0.5 * std::numbers::pi);
  const Eigen::ArrayXd grid = spectrum_grid(ctx.config, sys.mod.omega_M, sys.mod.kappa_M);
  const SpectrumBudget b = homodyne_spectrum(sys, theta, st.noise, grid);

  Csv csv("Omega_Hz,S_shot,S_CC,S_BB,S_thermal,S_total");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    csv.cell(hz(grid(i))).cell(b.shot(i)).cell(b.qrpn_c(i)).cell(b.laser_b(i)).cell(b.thermal(i))
        .cell(b.total(i)).end();
  }

  const double wM = sys.mod.omega_M;
  const BudgetPoint at = budget_point(sys, theta, st.noise, wM);
  const PhaseQuadratureTerms pq = phase_quadrature_closed_form(sys, wM);
  Json& j = ctx.summary;
  j["homodyne_angle_rad"] = theta;
  j["S_shot_at_omega_M"] = at.shot;
  j["S_CC_at_omega_M"] = at.qrpn_c;
  j["S_BB_at_omega_M"] = at.laser_b;
  j["S_thermal_at_omega_M"] = at.thermal;
  j["S_total_at_omega_M"] = at.total;
  j["S_LP_at_omega_M"] = back_action_at_resonance(st);
  j["S_LP_closed_form"] = qrpn_psd(sys.topology, sys.rates, sys.nc, wM);
  j["ba_to_thermal_ratio"] = ba_to_thermal_ratio(sys.rates, sys.nc, sys.mech);
  j["S_phi_shot_closed_form_at_omega_M"] = pq.shot;
  j["S_phi_qrpn_closed_form_at_omega_M"] = pq.qrpn;
  j["S_phi_thermal_closed_form_at_omega_M"] = pq.thermal;
  j["S_thermal_printed_prefactor_at_omega_M"] = pq.thermal_printed_prefactor;
  j["points"] = static_cast<int>(grid.size());
  write_outputs(dir, "qrpn_budget", csv, ctx);
}

void run_squeeze_spectrum(Context& ctx, const std::filesystem::path& dir) {
  const OperatingState& st = require_state(ctx);
  const System& sys = st.system;
  const SqueezeFeatures f = squeeze_features(sys);
  const double theta = homodyne_angle(ctx.config, st.nc, f.theta_opt);
  const Eigen::ArrayXd grid = spectrum_grid(ctx.config, sys.mod.omega_M, sys.mod.kappa_M);
  const SpectrumBudget b = homodyne_spectrum(sys, theta, st.noise, grid);

  Csv csv("Omega_Hz,S_C,S_B,S_thermal,S_out");
  Eigen::Index lowest = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double s_b = b.total(i) - b.field_c(i) - b.thermal(i);
    csv.cell(hz(grid(i))).cell(b.field_c(i)).cell(s_b).cell(b.thermal(i)).cell(b.total(i)).end();
    if (b.total(i) < b.total(lowest)) lowest = i;
  }

  const Dip dip = locate_dip(sys, theta);
  Json& j = ctx.summary;
  j["homodyne_angle_rad"] = theta;
  j["theta_opt_rad"] = f.theta_opt;
  j["correlation_angle_rad"] = f.correlation_angle;
  j["separation_estimate"] = f.separation_estimate;
  j["dip_observable"] = f.observable;
  j["dip_C_only_Hz"] = hz(dip.omega);
  j["dip_C_only_value"] = dip.value;
  j["dip_offset_over_Gamma_sq"] = (dip.omega - f.omega_sq) / f.Gamma_sq;
  j["S_out_min"] = b.total(lowest);
  j["S_out_min_Hz"] = hz(grid(lowest));
  write_outputs(dir, "squeeze_spectrum", csv, ctx);
}

void run_optimize(Context& ctx, const std::filesystem::path& dir) {
  const std::vector<EpsilonPoint> scan = epsilon_scan(ctx.scenario, ctx.config.epsilon_step);
  Csv csv("epsilon,kappa_M_Hz,n_T");
  for (const EpsilonPoint& p : scan) csv.cell(p.epsilon).cell(hz(p.kappa_M)).cell(p.n_T).end();

  const double found = argmax_kappa(scan);
  const double eps = ctx.summary["epsilon_opt"].get<double>();
  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  double best_n = kNaN;
  for (const EpsilonPoint& p : scan) {
    if (!p.valid) continue;
    if (!(p.n_T >= best_n)) best_n = p.n_T;
    if (p.epsilon <= eps) continue;
    if (p.kappa_M > previous) monotone = false;
    previous = p.kappa_M;
  }
  Json& j = ctx.summary;
  j["argmax_kappa_M_epsilon"] = number_or_null(found);
  j["argmax_deviation"] = number_or_null(std::abs(found - eps));
  j["grid_step"] = ctx.config.epsilon_step;
  j["kappa_M_monotone_above_opt"] = monotone;
  j["min_n_T"] = number_or_null(best_n);
  if (!monotone) ctx.warnings.push_back("kappa_M is not monotone between epsilon_opt and epsilon_max");
  write_outputs(dir, "optimize_epsilon", csv, ctx);
}

bool run_verify(Context& ctx, const std::filesystem::path& dir) {
  const VerifyReport report = verify_closed_forms(
      ctx.scenario, ctx.config.verify_samples, static_cast<std::uint64_t>(ctx.config.verify_seed));
  Csv csv("check,max_deviation,tolerance,passed,samples");
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    csv.cell(c.name).cell(c.max_deviation).cell(c.tolerance).cell(c.passed).cell(c.samples).end();
    Json e;
    e["check"] = c.name;
    e["max_deviation"] = number_or_null(c.max_deviation);
    e["tolerance"] = c.tolerance;
    e["passed"] = c.passed;
    e["samples"] = c.samples;
    e["domain_errors"] = c.errors;
    e["worst"] = c.worst;
    checks.push_back(e);
  }
  ctx.summary["passed"] = report.passed();
  ctx.summary["checks"] = checks;
  write_outputs(dir, "verify", csv, ctx);
  report.require_passed();
  return true;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"couplings",        "cooling-curve",
                                                 "qrpn-budget",      "squeeze-spectrum",
                                                 "optimize-epsilon", "verify"};
  return names;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int run(const std::string& command, const ModelConfig& config,
        const std::filesystem::path& out_dir, std::ostream& err) {
  try {
    std::filesystem::create_directories(out_dir);
    Context ctx{config, to_scenario(config), std::nullopt, Json::object(), {}};
    base_summary(ctx, command);
    if (command == "couplings") {
      run_couplings(ctx, out_dir);
    } else if (command == "cooling-curve") {
      run_cooling(ctx, out_dir);
    } else if (command == "qrpn-budget") {
      run_qrpn_budget(ctx, out_dir);
    } else if (command == "squeeze-spectrum") {
      run_squeeze_spectrum(ctx, out_dir);
    } else if (command == "optimize-epsilon") {
      run_optimize(ctx, out_dir);
    } else if (command == "verify") {
      run_verify(ctx, out_dir);
    } else {
      err << "unknown command '" << command << "'\n";
      return 1;
    }
  } catch (const VerificationFailed& e) {
    err << "verification failed: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << command << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << command << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace msi
