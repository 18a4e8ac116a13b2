#include <doctest.h>

#include <cmath>

#include "msi/errors.hpp"
#include "msi/optimize.hpp"

using namespace msi;

namespace {

SweepSpec default_sweep() { return SweepSpec{"gamma0", two_pi * 1e4, two_pi * 3e6, 200, GridScale::log}; }

double min_n_T(const Scenario& s) {
  const CoolingCurve c = cooling_sweep(s, default_sweep());
  return c.points[c.minimum()].n_T;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("optimal and maximal imbalance") {
  const MirrorSpec perfect{1.0, 0.0};
  CHECK(epsilon_opt(perfect, 1e-12) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(epsilon_max(perfect, 1e-12) == doctest::Approx(1.0));
  const MirrorSpec m = MirrorSpec::from_power_reflectivity(0.98);
  CHECK(epsilon_opt(m, 2.1e-4) == doctest::Approx(0.698).epsilon(1e-3));
  CHECK_THROWS_AS(epsilon_opt(m, 1.5), UnitError);
}

TEST_CASE("eta vanishes at the maximal imbalance and turns imaginary beyond") {
  Scenario s;
  s.epsilon_mode = EpsilonMode::max;
  const OperatingState st = evaluate(s);
  CHECK(std::abs(st.couplings.eta) * s.wavelength < 1e-9);
  s.epsilon_mode = EpsilonMode::fixed;
  s.epsilon = st.bs.epsilon + 1e-6;
  CHECK_THROWS_AS(evaluate(s), ImaginaryEta);
}

TEST_CASE("grid argmax of kappa_M finds the optimal imbalance") {
  for (Topology top : {Topology::srm, Topology::prm}) {
    Scenario s;
    s.topology = top;
    const std::vector<EpsilonPoint> scan = epsilon_scan(s, 1e-3);
    CHECK(std::abs(argmax_kappa(scan) - resolved_epsilon(s)) <= 1e-3);

    double previous = 1e300;
    for (const EpsilonPoint& p : scan) {
      if (p.epsilon <= resolved_epsilon(s)) continue;
      CHECK(p.kappa_M < previous);
      previous = p.kappa_M;
    }
  }
}

TEST_CASE("cooling curves") {
  Scenario tuned;
  Scenario baseline;
  baseline.reflectivity = 0.5;
  baseline.epsilon_mode = EpsilonMode::fixed;
  baseline.epsilon = 0.0;

  tuned.topology = Topology::srm;
  CHECK(min_n_T(tuned) == doctest::Approx(52.1419).epsilon(1e-4));
  tuned.topology = Topology::prm;
  CHECK(min_n_T(tuned) == doctest::Approx(49.4098).epsilon(1e-4));
  baseline.topology = Topology::srm;
  CHECK(min_n_T(baseline) == doctest::Approx(359.365).epsilon(1e-4));
  baseline.topology = Topology::prm;
  CHECK(min_n_T(baseline) == doctest::Approx(241.827).epsilon(1e-4));
}

TEST_CASE("unsolvable sweep points are flagged, not dropped") {
  Scenario s;
  s.epsilon_mode = EpsilonMode::fixed;
  s.epsilon = 0.95;
  const SweepSpec sweep{"gamma0", two_pi * 1e4, 0.9 / s.round_trip(), 50, GridScale::log};
  const CoolingCurve c = cooling_sweep(s, sweep);
  REQUIRE(c.points.size() == 50);
  int flagged = 0;
  for (const CoolingPoint& p : c.points) {
    if (!p.stable) {
      ++flagged;
      CHECK(std::isnan(p.n_T));
      CHECK(!p.reason.empty());
    }
  }
  CHECK(flagged > 0);
  CHECK(flagged < 50);
}

TEST_CASE("sweep grids") {
  const Eigen::ArrayXd g = default_sweep().grid();
  CHECK(g.size() == 200);
  CHECK(g(0) == two_pi * 1e4);
  CHECK(g(199) == two_pi * 3e6);
  CHECK_THROWS_AS((SweepSpec{"gamma0", 2.0, 1.0, 10, GridScale::linear}.grid()), UnitError);
  CHECK_THROWS_AS((SweepSpec{"gamma0", 0.0, 1.0, 10, GridScale::log}.grid()), UnitError);
  CHECK_THROWS_AS((SweepSpec{"gamma0", 1.0, 2.0, 1, GridScale::linear}.grid()), UnitError);
}

TEST_CASE("dip finder on the signal-recycling squeezing configuration") {
  Scenario s;
  s.gamma0 = two_pi * 3e5;
  const OperatingState st = evaluate(s);
  const SqueezeFeatures f = squeeze_features(st.system);
  const Dip dip = locate_dip(st.system, f.theta_opt);
  CHECK(std::abs(dip.omega - f.omega_sq) < 0.25 * f.Gamma_sq);
  CHECK(dip.value < 1.0);
  CHECK(dip.value == doctest::Approx(budget_point(st.system, f.theta_opt, InputNoise{}, dip.omega).field_c));
}

TEST_CASE("verification harness") {
  const Scenario s;
  const VerifyReport report = verify_closed_forms(s, 20, 3);
  for (const CheckResult& c : report.checks) {
    INFO(c.name << " " << c.max_deviation << " " << c.worst);
    CHECK(c.passed);
    CHECK(!std::isnan(c.max_deviation));
  }
  CHECK_NOTHROW(report.require_passed());
  CHECK_THROWS_AS(verify_closed_forms(s, 0, 1), UnitError);

  VerifyReport failing = report;
  failing.checks[0].passed = false;
  CHECK_THROWS_AS(failing.require_passed(), VerificationFailed);
}

}
