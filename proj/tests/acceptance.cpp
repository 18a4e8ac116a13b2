#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "msi/optimize.hpp"

using namespace msi;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %2d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void unitarity() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const MirrorSpec m = MirrorSpec::from_power_reflectivity(u(rng));
    const auto gm = generalized_mirror<double>(m.r, m.t, 1.998 * u(rng) - 0.999,
                                               2.0 * std::numbers::pi * u(rng));
    worst = std::max(worst, std::abs(gm.transmission * gm.transmission +
                                     std::norm(gm.reflection) - 1.0));
  }
  report(1, worst <= 1e-12, "T^2 + |R|^2 = 1 over 5000 draws", fmt("max error %.3g", worst));
}

void couplings() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const OpticalCarrier carrier;
  const double L = 0.05;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MirrorSpec m = MirrorSpec::from_power_reflectivity(0.3 + 0.69 * u(rng));
    const BeamSplitterSpec bs{0.05 + 0.9 * u(rng)};
    const OperatingPoint op{std::asin(1.9 * u(rng) - 0.95) / (2.0 * carrier.wavenumber())};
    const CouplingPair a = couplings_closed_form(m, bs, op, carrier, L);
    const CouplingPair b = couplings_by_derivative(m, bs, op, carrier, 2.0 * L / phys::c);
    worst = std::max({worst, std::abs(a.xi - b.xi) / std::abs(a.xi),
                      std::abs(a.eta - b.eta) / std::abs(a.eta)});
  }
  report(2, worst <= 1e-6, "closed-form couplings vs derivatives, 100 draws",
         fmt("max relative deviation %.3g", worst));
}

void occupancy_anchor() {
  const MechanicalOscillator mech = MechanicalOscillator::make(5e-11, two_pi * 350e3, 1e6, 20.0);
  ModifiedOscillator mod;
  mod.omega_M = mech.omega_m;
  mod.kappa_M = mech.kappa_m;
  const double n = thermal_occupation(mech, mod, 0.0).n_T;
  report(3, std::abs(n / 1.2e6 - 1.0) <= 0.05, "thermal phonons at 20 K, 350 kHz",
         fmt("n_T = %.6g", n));
}

SweepSpec sweep() { return SweepSpec{"gamma0", two_pi * 1e4, two_pi * 3e6, 200, GridScale::log}; }

void cooling_curves() {
  Scenario tuned, base;
  base.reflectivity = 0.5;
  base.epsilon_mode = EpsilonMode::fixed;
  base.epsilon = 0.0;
  bool ok = true;
  std::ostringstream d;
  CoolingCurve t[2], b[2];
  for (int k = 0; k < 2; ++k) {
    tuned.topology = base.topology = k == 0 ? Topology::srm : Topology::prm;
    t[k] = cooling_sweep(tuned, sweep());
    b[k] = cooling_sweep(base, sweep());
    const int i = t[k].minimum();
    const double n = i < 0 ? NAN : t[k].points[i].n_T;
    ok = ok && n >= 10.0 && n <= 100.0;
    d << to_string(tuned.topology) << " min n_T " << n << "; ";
    for (std::size_t j = 0; j < t[k].points.size(); ++j) {
      if (t[k].points[j].stable && b[k].points[j].stable &&
          !(t[k].points[j].n_T < b[k].points[j].n_T)) {
        ok = false;
        d << "tuned above baseline at point " << j << "; ";
      }
    }
  }
  int prm_wins = 0, compared = 0;
  for (std::size_t j = 0; j < t[0].points.size(); ++j) {
    if (!(t[0].points[j].gamma0 < tuned.gamma1)) continue;
    if (!t[0].points[j].stable || !t[1].points[j].stable) continue;
    ++compared;
    prm_wins += t[1].points[j].n_T < t[0].points[j].n_T;
  }
  ok = ok && compared > 0 && prm_wins == compared;
  d << "PRM below SRM at " << prm_wins << "/" << compared << " points with gamma0 < gamma1";
  report(4, ok, "cooling curves, optimal vs balanced imbalance", d.str());
}

void squeezed_cooling() {
  Scenario s;
  s.power = 1.0;
  s.quality = 1e7;
  s.epsilon_mode = EpsilonMode::fixed;
  s.epsilon = 0.15;
  s.squeeze_db = -6.0;
  s.squeeze_target = SqueezeTarget::backaction;
  bool ok = true;
  std::ostringstream d;
  for (Topology top : {Topology::srm, Topology::prm}) {
    s.topology = top;
    const CoolingCurve c = cooling_sweep(s, sweep());
    const int i = c.minimum();
    const double n = i < 0 ? NAN : c.points[i].n_T;
    ok = ok && n < 10.0;
    d << to_string(top) << " min n_T " << n << "; ";
  }
  report(5, ok, "1 W, Q = 1e7, eps = 0.15, 6 dB squeezing", d.str());
}

void power_ratio() {
  const Pump pump = Pump::make(1.0, OpticalCarrier{});
  const double g1 = two_pi * 1e6, tau = 1e-10;
  const double srm = mean_fields(Topology::srm, rates_from_bandwidths(g1, g1, tau), pump).intracavity;
  const double prm =
      mean_fields(Topology::prm, rates_from_bandwidths(1e-3 * g1, g1, tau), pump).intracavity;
  const double ratio = prm * prm / (srm * srm);
  report(6, std::abs(ratio / 4.0 - 1.0) <= 0.01, "PRM / SRM maximal intracavity power",
         fmt("ratio %.6g at gamma0 = 1e-3 gamma1", ratio));
}

void shot_floor() {
  const Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(50, std::log(1e3), std::log(1e8)).exp();
  double worst = 0.0;
  for (Topology top : {Topology::srm, Topology::prm}) {
    System sys;
    sys.topology = top;
    sys.rates = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, 1e-10);
    sys.mech = MechanicalOscillator::make(5e-11, two_pi * 350e3, 1e6, 20.0);
    sys.mod = modified_oscillator(top, sys.rates, sys.nc, sys.mech);
    for (double theta : {0.0, 0.9, std::numbers::pi / 2}) {
      const SpectrumBudget s = homodyne_spectrum(sys, theta, InputNoise::vacuum(sys.mech), grid);
      worst = std::max(worst, (s.total - 1.0).abs().maxCoeff());
    }
  }
  report(7, worst <= 1e-12, "zero-coupling output equals shot noise",
         fmt("max |S - 1| = %.3g", worst));
}

void noise_ordering() {
  Scenario s;
  s.gamma0 = two_pi * 1e5;
  s.gamma1 = two_pi * 1e6;
  s.epsilon_mode = EpsilonMode::max;
  const OperatingState st = evaluate(s);
  const System& sys = st.system;
  const double wM = sys.mod.omega_M, kM = sys.mod.kappa_M;
  const Eigen::ArrayXd band = Eigen::ArrayXd::LinSpaced(61, wM - 3.0 * kM, wM + 3.0 * kM);
  const double theta = std::numbers::pi / 2;
  const SpectrumBudget plain = homodyne_spectrum(sys, theta, st.noise, band);
  InputNoise anti = st.noise;
  anti.squeeze_db = 10.0;
  const SpectrumBudget sqz = homodyne_spectrum(sys, theta, anti, band);

  const bool thermal_over_cc = (plain.thermal > plain.qrpn_c).all();
  const bool cc_over_bb = (plain.qrpn_c > plain.laser_b).all();
  const bool sqz_over_thermal = (sqz.qrpn_c > sqz.thermal).all();
  const double r = (plain.qrpn_c / plain.thermal).maxCoeff();
  std::ostringstream d;
  d << "S_thermal > S_CC " << (thermal_over_cc ? "yes" : "no") << " (S_CC/S_thermal up to " << r
    << "); S_CC > S_BB " << (cc_over_bb ? "yes" : "no") << "; +10 dB S_CC > S_thermal "
    << (sqz_over_thermal ? "yes" : "no");
  report(8, thermal_over_cc && cc_over_bb && sqz_over_thermal,
         "noise ordering around omega_M, phase quadrature", d.str());
}

double total_minimum(const System& sys, double theta) {
  const Eigen::ArrayXd grid =
      Eigen::ArrayXd::LinSpaced(4000, std::log(0.5 * sys.mech.omega_m),
                                std::log(2.0 * sys.rates.gamma_plus)).exp();
  return homodyne_spectrum(sys, theta, InputNoise::vacuum(sys.mech), grid).total.minCoeff();
}

void squeezing_dip() {
  bool ok = true;
  std::ostringstream d;
  for (Topology top : {Topology::srm, Topology::prm}) {
    Scenario s;
    s.topology = top;
    s.gamma1 = two_pi * (top == Topology::srm ? 1e6 : 3e5);
    s.gamma0 = two_pi * (top == Topology::srm ? 3e5 : 1e6);
    const OperatingState st = evaluate(s);
    const SqueezeFeatures f = squeeze_features(st.system);
    const Dip dip = locate_dip(st.system, f.theta_opt);
    const double offset = (dip.omega - f.omega_sq) / f.Gamma_sq;
    bool deepens = true;
    double previous = 2.0;
    std::ostringstream depth;
    for (double q : {1e6, 1e7, 1e8}) {
      s.quality = q;
      const OperatingState sq = evaluate(s);
      const double m = total_minimum(sq.system, squeeze_features(sq.system).theta_opt);
      depth << (q == 1e6 ? "" : " -> ") << m;
      deepens = deepens && m < previous;
      previous = m;
    }
    const bool here = std::abs(offset) <= 0.25 && dip.value < 1.0 && deepens;
    ok = ok && here;
    d << to_string(top) << ": omega_sq " << f.omega_sq / two_pi << " Hz, dip "
      << dip.omega / two_pi << " Hz (" << offset << " Gamma_sq), C-only min " << dip.value
      << ", total min " << depth.str() << (here ? "" : " <- fails") << "; ";
  }
  report(9, ok, "squeezing dip position, depth and Q dependence", d.str());
}

void argmax() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_eta = 0.0;
  int used = 0, skipped = 0;
  while (used < 25) {
    Scenario s;
    s.reflectivity = 0.5 + 0.49 * u(rng);
    s.gamma0 = two_pi * std::exp(std::log(1e4) + u(rng) * std::log(300.0));
    const double eps = resolved_epsilon(s);
    const std::vector<EpsilonPoint> scan = epsilon_scan(s, 1e-3);
    const double found = argmax_kappa(scan);
    const bool near_unstable = std::any_of(scan.begin(), scan.end(), [&](const EpsilonPoint& p) {
      return !p.valid && std::abs(p.epsilon - eps) <= 2e-3;
    });
    if (std::isnan(found) || near_unstable) {
      ++skipped;
      continue;
    }
    ++used;
    worst = std::max(worst, std::abs(found - eps));
    s.epsilon_mode = EpsilonMode::max;
    worst_eta = std::max(worst_eta, std::abs(evaluate(s).couplings.eta) * s.wavelength);
  }
  std::ostringstream d;
  d << "max |argmax - eps_opt| " << worst << " over 25 draws (" << skipped
    << " unstable draws skipped); max |eta(eps_max)| lambda " << worst_eta;
  report(10, worst <= 1e-3 && worst_eta <= 1e-9, "optimal imbalance vs grid argmax", d.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty()) {
    report(11, false, "repeated CLI runs are byte-identical", "no CLI path given");
    return;
  }
  fs::remove_all(work);
  bool ok = true;
  int files = 0;
  for (const char* cmd : {"couplings", "cooling-curve", "qrpn-budget", "squeeze-spectrum",
                          "optimize-epsilon", "verify"}) {
    for (const char* run : {"a", "b"}) {
      const std::string line =
          "\"" + cli + "\" " + cmd + " --out \"" + (work / run).string() + "\" 2>/dev/null";
      ok = ok && std::system(line.c_str()) == 0;
    }
  }
  for (const auto& e : fs::directory_iterator(work / "a")) {
    ++files;
    ok = ok && slurp(e.path()) == slurp(work / "b" / e.path().filename());
  }
  report(11, ok && files > 0, "repeated CLI runs are byte-identical",
         std::to_string(files) + " files compared");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "msi_acceptance";
  unitarity();
  couplings();
  occupancy_anchor();
  cooling_curves();
  squeezed_cooling();
  power_ratio();
  shot_floor();
  noise_ordering();
  squeezing_dip();
  argmax();
  determinism(cli, work);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
