#include "msi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "msi/errors.hpp"

namespace msi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCoarseDipPoints = 2000;
constexpr int kArgmaxDraws = 25;
constexpr double kArgmaxStep = 1e-3;

void check_gamma0_tau(double g0tau) {
  if (!(g0tau > 0.0 && g0tau < 1.0)) throw UnitError("gamma0 * tau must lie in (0, 1)");
}

}  // namespace

double epsilon_opt(const MirrorSpec& mirror, double g0tau) {
  check_gamma0_tau(g0tau);
  return mirror.r / std::numbers::sqrt2 * std::sqrt(1.0 - g0tau) - mirror.t * std::sqrt(g0tau);
}

double epsilon_max(const MirrorSpec& mirror, double g0tau) {
  check_gamma0_tau(g0tau);
  return mirror.r * std::sqrt(1.0 - g0tau) - mirror.t * std::sqrt(g0tau);
}

void SweepSpec::validate() const {
  if (!(lo < hi)) throw UnitError("sweep " + parameter + ": lo must be below hi");
  if (points < 2) throw UnitError("sweep " + parameter + ": need at least 2 points");
  if (scale == GridScale::log && !(lo > 0.0)) {
    throw UnitError("sweep " + parameter + ": log grid needs lo > 0");
  }
}

Eigen::ArrayXd SweepSpec::grid() const {
  validate();
  if (scale == GridScale::linear) return Eigen::ArrayXd::LinSpaced(points, lo, hi);
  Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(points, std::log(lo), std::log(hi)).exp();
  g(0) = lo;
  g(points - 1) = hi;
  return g;
}

int CoolingCurve::minimum() const {
  int best = -1;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (!points[i].stable) continue;
    if (best < 0 || points[i].n_T < points[best].n_T) best = i;
  }
  return best;
}

CoolingCurve cooling_sweep(const Scenario& base, const SweepSpec& sweep) {
  const Eigen::ArrayXd grid = sweep.grid();
  CoolingCurve curve;
  curve.points.reserve(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    Scenario s = base;
    s.gamma0 = grid(i);
    CoolingPoint p;
    p.gamma0 = grid(i);
    p.n_T = kNaN;
    p.kappa_M = kNaN;
    try {
      p.epsilon = resolved_epsilon(s);
      const OperatingState st = evaluate(s);
      p.n_T = occupancy(st).n_T;
      p.kappa_M = st.system.mod.kappa_M;
      p.stable = true;
    } catch (const Error& e) {
      p.reason = e.what();
    }
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<EpsilonPoint> epsilon_scan(const Scenario& base, double step) {
  if (!(step > 0.0)) throw UnitError("epsilon step must be positive");
  const MirrorSpec mirror = MirrorSpec::from_power_reflectivity(base.reflectivity);
  const double top = epsilon_max(mirror, base.gamma0 * base.round_trip());
  std::vector<EpsilonPoint> scan;
  for (int i = 0;; ++i) {
    const double eps = i * step;
    if (!(eps < top)) break;
    Scenario s = base;
    s.epsilon_mode = EpsilonMode::fixed;
    s.epsilon = eps;
    EpsilonPoint p{eps, kNaN, kNaN, false};
    try {
      const OperatingState st = evaluate(s);
      p.kappa_M = st.system.mod.kappa_M;
      p.n_T = occupancy(st).n_T;
      p.valid = true;
    } catch (const Error&) {
    }
    scan.push_back(p);
  }
  return scan;
}

double argmax_kappa(const std::vector<EpsilonPoint>& scan) {
  double best = kNaN, best_kappa = -std::numeric_limits<double>::infinity();
  for (const EpsilonPoint& p : scan) {
    if (p.valid && p.kappa_M > best_kappa) {
      best_kappa = p.kappa_M;
      best = p.epsilon;
    }
  }
  return best;
}

Dip locate_dip(const System& sys, double theta, const InputNoise& noise, double lo, double hi) {
  if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("dip bracket must satisfy 0 < lo < hi");
  const auto field = [&](double omega) { return budget_point(sys, theta, noise, omega).field_c; };

  const Eigen::ArrayXd grid =
      Eigen::ArrayXd::LinSpaced(kCoarseDipPoints, std::log(lo), std::log(hi)).exp();
  Eigen::Index best = 0;
  double best_value = field(grid(0));
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    const double v = field(grid(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = grid(std::max<Eigen::Index>(best - 1, 0));
  const double b = grid(std::min<Eigen::Index>(best + 1, grid.size() - 1));
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      field, a, b, std::numeric_limits<double>::digits / 2);
  if (fx < best_value) return Dip{x, fx};
  return Dip{grid(best), best_value};
}

Dip locate_dip(const System& sys, double theta) {
  return locate_dip(sys, theta, InputNoise{}, 0.5 * sys.mech.omega_m,
                    2.0 * sys.rates.gamma_plus);
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void VerifyReport::require_passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) {
      std::ostringstream msg;
      msg << c.name << ": deviation " << c.max_deviation << " exceeds " << c.tolerance;
      if (!c.worst.empty()) msg << " at " << c.worst;
      throw VerificationFailed(msg.str());
    }
  }
}

namespace {

class Check {
 public:
  Check(std::string name, double tolerance) { r_.name = std::move(name); r_.tolerance = tolerance; }

  void record(double deviation, const std::string& where) {
    ++r_.samples;
    if (std::isnan(r_.max_deviation)) return;
    if (std::isnan(deviation) || deviation > r_.max_deviation) {
      r_.max_deviation = deviation;
      r_.worst = where;
    }
  }
  void error() { ++r_.errors; }

  CheckResult finish() {
    r_.passed = !std::isnan(r_.max_deviation) && r_.max_deviation <= r_.tolerance;
    return r_;
  }

 private:
  CheckResult r_;
};

double rel(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double rel(double a, double b) { return rel(Complex(a), Complex(b)); }

double row_deviation(const TransferRow& a, const TransferRow& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

std::string describe(const Scenario& s, double omega = kNaN) {
  std::ostringstream o;
  o.precision(6);
  o << to_string(s.topology) << " r2=" << s.reflectivity
    << " gamma0/2pi=" << s.gamma0 / two_pi << " gamma1/2pi=" << s.gamma1 / two_pi
    << " eps=" << resolved_epsilon(s);
  if (!std::isnan(omega)) o << " Omega/2pi=" << omega / two_pi;
  return o.str();
}

struct Sampler {
  std::mt19937_64 rng;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  Scenario scenario(const Scenario& base) {
    Scenario s = base;
    s.topology = uniform(0.0, 1.0) < 0.5 ? Topology::srm : Topology::prm;
    s.reflectivity = uniform(0.5, 0.99);
    s.gamma0 = two_pi * log_uniform(1e4, 3e6);
    s.gamma1 = two_pi * log_uniform(1e5, 3e6);
    s.epsilon_mode = EpsilonMode::fixed;
    const MirrorSpec m = MirrorSpec::from_power_reflectivity(s.reflectivity);
    s.epsilon = uniform(0.05, 0.95) * epsilon_max(m, s.gamma0 * s.round_trip());
    s.impedance = ImpedanceModel::full;
    return s;
  }

  double omega(const System& sys) {
    return log_uniform(0.1 * sys.mech.omega_m, 10.0 * sys.rates.gamma_plus);
  }
};

CheckResult check_unitarity(Sampler& g, int draws) {
  Check c("unitarity", 1e-12);
  for (int i = 0; i < draws; ++i) {
    const double r2 = g.uniform(0.0, 1.0);
    const double eps = g.uniform(-0.999, 0.999);
    const double phase = g.uniform(-std::numbers::pi, std::numbers::pi);
    const MirrorSpec m = MirrorSpec::from_power_reflectivity(r2);
    const GeneralizedMirror gm = generalized_mirror<double>(m.r, m.t, eps, phase);
    std::ostringstream where;
    where << "r2=" << r2 << " eps=" << eps << " phase=" << phase;
    c.record(std::abs(gm.transmission * gm.transmission + std::norm(gm.reflection) - 1.0),
             where.str());
  }
  return c.finish();
}

CheckResult check_couplings(Sampler& g, const Scenario& base, int draws) {
  Check c("couplings_vs_derivative", 1e-6);
  OpticalCarrier carrier{base.wavelength};
  for (int i = 0; i < draws; ++i) {
    const MirrorSpec m = MirrorSpec::from_power_reflectivity(g.uniform(0.3, 0.99));
    const BeamSplitterSpec bs{g.uniform(0.05, 0.95)};
    const OperatingPoint op{std::asin(g.uniform(-0.95, 0.95)) / (2.0 * carrier.wavenumber())};
    std::ostringstream where;
    where << "r=" << m.r << " eps=" << bs.epsilon << " x0=" << op.x0;
    try {
      const CouplingPair closed = couplings_closed_form(m, bs, op, carrier, base.cavity_length);
      const CouplingPair fd = couplings_by_derivative(m, bs, op, carrier, base.round_trip());
      c.record(std::max(rel(closed.xi, fd.xi), rel(closed.eta, fd.eta)), where.str());
    } catch (const Error&) {
      c.error();
    }
  }
  return c.finish();
}

CheckResult check_eta_at_max(Sampler& g, const Scenario& base, int draws) {
  Check c("eta_at_epsilon_max", 1e-9);
  for (int i = 0; i < draws; ++i) {
    Scenario s = g.scenario(base);
    s.epsilon_mode = EpsilonMode::max;
    try {
      const OperatingState st = evaluate(s);
      c.record(std::abs(st.couplings.eta) * s.wavelength, describe(s));
    } catch (const Error&) {
      c.error();
    }
  }
  return c.finish();
}

CheckResult check_argmax(Sampler& g, const Scenario& base, int draws) {
  Check c("epsilon_opt_argmax", kArgmaxStep);
  for (int i = 0; i < draws; ++i) {
    Scenario s = base;
    s.reflectivity = g.uniform(0.5, 0.99);
    s.gamma0 = two_pi * g.log_uniform(1e4, 3e6);
    const double eps = epsilon_opt(MirrorSpec::from_power_reflectivity(s.reflectivity),
                                   s.gamma0 * s.round_trip());
    const std::vector<EpsilonPoint> scan = epsilon_scan(s, kArgmaxStep);
    const bool unstable_near_peak = std::any_of(scan.begin(), scan.end(), [&](const EpsilonPoint& p) {
      return !p.valid && std::abs(p.epsilon - eps) <= 2.0 * kArgmaxStep;
    });
    const double found = argmax_kappa(scan);
    if (std::isnan(found) || unstable_near_peak) {
      c.error();
      continue;
    }
    c.record(std::abs(found - eps), describe(s));
  }
  return c.finish();
}

CheckResult check_back_action(Sampler& g, const Scenario& base, int draws) {
  Check c("back_action_psd", 0.1);
  for (int i = 0; i < draws; ++i) {
    const Scenario s = g.scenario(base);
    try {
      const OperatingState st = evaluate(s);
      const System& sys = st.system;
      const double wM = sys.mod.omega_M;
      const double pipeline = back_action_psd(sys, InputNoise{}, wM);
      const double closed = qrpn_psd(s.topology, sys.rates, sys.nc, wM);
      c.record(rel(pipeline, closed), describe(s, wM));
    } catch (const Error&) {
      c.error();
    }
  }
  return c.finish();
}

void check_rows(Sampler& g, const Scenario& base, int draws, Check& langevin, Check& closed,
                Check& ratio) {
  for (int i = 0; i < draws; ++i) {
    const Scenario s = g.scenario(base);
    try {
      const OperatingState st = evaluate(s);
      const System& sys = st.system;
      const LangevinModel model = langevin_model(st);
      const double theta = back_action_quadrature(s.topology, sys.nc);
      for (int k = 0; k < 3; ++k) {
        const double omega = g.omega(sys);
        const std::string where = describe(s, omega);
        const LangevinResponse ref = langevin_response(model, omega);
        const QuadratureRows rows = output_transfer(sys, omega);
        langevin.record(std::max({row_deviation(ref.displacement, displacement_transfer(sys, omega)),
                                  row_deviation(ref.amplitude, rows.amplitude),
                                  row_deviation(ref.phase, rows.phase)}),
                        where);
        const Complex composed = composed_c_coefficient(sys, theta, omega);
        const Complex residual = correlated_c_residual(sys, omega);
        closed.record(rel(composed, correlated_c_coefficient(sys, omega) + residual), where);
        ratio.record(rel(composed, correlated_c_ratio_form(sys, omega) + residual), where);
      }
    } catch (const Error&) {
      langevin.error();
      closed.error();
      ratio.error();
    }
  }
}

CheckResult check_dip(const Scenario& base) {
  Check c("squeeze_dip", 0.25);
  Scenario s = base;
  s.impedance = ImpedanceModel::full;
  try {
    const OperatingState st = evaluate(s);
    const SqueezeFeatures f = squeeze_features(st.system);
    if (f.observable) {
      const Dip dip = locate_dip(st.system, f.theta_opt);
      c.record(std::abs(dip.omega - f.omega_sq) / f.Gamma_sq, describe(s, dip.omega));
    }
  } catch (const Error&) {
    c.error();
  }
  CheckResult r = c.finish();
  if (r.samples == 0) r.passed = true;
  return r;
}

}  // namespace

VerifyReport verify_closed_forms(const Scenario& base, int samples, std::uint64_t seed) {
  if (samples < 1) throw UnitError("verify needs at least one sample");
  Sampler g{std::mt19937_64(seed)};
  VerifyReport report;
  report.checks.push_back(check_unitarity(g, 10 * samples));
  report.checks.push_back(check_couplings(g, base, samples));
  report.checks.push_back(check_eta_at_max(g, base, samples));
  report.checks.push_back(check_argmax(g, base, std::min(samples, kArgmaxDraws)));
  report.checks.push_back(check_back_action(g, base, samples));

  Check langevin("langevin_vs_transfer", 1e-9);
  Check closed("correlated_c_closed_form", 1e-9);
  Check ratio("correlated_c_ratio_form", 1e-9);
  check_rows(g, base, samples, langevin, closed, ratio);
  report.checks.push_back(langevin.finish());
  report.checks.push_back(closed.finish());
  report.checks.push_back(ratio.finish());

  report.checks.push_back(check_dip(base));
  return report;
}

}  // namespace msi
