#include <doctest.h>

#include <cmath>

#include "msi/cavity.hpp"
#include "msi/errors.hpp"

using namespace msi;

namespace {

const double kTau = 2.0 * 0.05 / phys::c;

MechanicalOscillator table_oscillator() {
  return MechanicalOscillator::make(5e-11, two_pi * 350e3, 1e6, 20.0);
}

}  // namespace

TEST_SUITE("cavity") {

TEST_CASE("rate identity") {
  for (double g0 : {1e3, 1e5, 3e6}) {
    const CavityRates r = rates_from_bandwidths(g0, 2.0e6, kTau);
    const double lhs = r.gamma0 * r.gamma1 + r.gamma_minus * r.gamma_minus;
    CHECK(lhs == doctest::Approx(r.gamma_plus * r.gamma_plus).epsilon(1e-14));
  }
  const CavityRates r = cavity_rates(0.01, 0.02, kTau);
  CHECK(r.gamma0 == doctest::Approx(1e-4 / kTau));
  CHECK_THROWS_AS(rates_from_bandwidths(-1.0, 1.0, kTau), UnitError);
}

TEST_CASE("mean fields conserve power") {
  const OpticalCarrier carrier;
  const Pump pump = Pump::make(0.1, carrier);
  for (Topology top : {Topology::srm, Topology::prm}) {
    const CavityRates r = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, kTau);
    const MeanFields f = mean_fields(top, r, pump);
    CHECK(f.reflected * f.reflected + f.output * f.output ==
          doctest::Approx(pump.amplitude * pump.amplitude).epsilon(1e-14));
  }
}

TEST_CASE("power recycling stores four times the signal-recycling maximum") {
  const OpticalCarrier carrier;
  const Pump pump = Pump::make(1.0, carrier);
  const double g1 = two_pi * 1e6;
  const MeanFields srm = mean_fields(Topology::srm, rates_from_bandwidths(g1, g1, kTau), pump);
  const MeanFields prm =
      mean_fields(Topology::prm, rates_from_bandwidths(1e-4 * g1, g1, kTau), pump);
  const double ratio = std::pow(prm.intracavity / srm.intracavity, 2);
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("normalized couplings product") {
  const OpticalCarrier carrier;
  const Pump pump = Pump::make(0.1, carrier);
  const MechanicalOscillator mech = table_oscillator();
  const CavityRates r = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, kTau);
  const CouplingPair c{30.0, 2e6};
  const NormalizedCouplings nc = normalized_couplings(c, pump, mech, r, carrier);
  const double gp = r.gamma_plus;
  CHECK(nc.X * nc.H == doctest::Approx(c.eta * c.xi * 0.1 / (mech.mass * gp * gp * gp)));
  for (Topology top : {Topology::srm, Topology::prm}) {
    for (double w : {0.0, 1e5, 1e7}) {
      const Complex a = optical_spring(top, r, c, pump, mech, w);
      const Complex b = optical_spring(top, r, nc, w);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("positive eta xi softens and damps") {
  const MechanicalOscillator mech = table_oscillator();
  const CavityRates r = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, kTau);
  const NormalizedCouplings nc{0.5, 2.0};
  for (Topology top : {Topology::srm, Topology::prm}) {
    const Complex s = optical_spring(top, r, nc, mech.omega_m);
    CHECK(s.real() < 0.0);
    CHECK(s.imag() < 0.0);
    const ModifiedOscillator mod = modified_oscillator(top, r, nc, mech);
    CHECK(mod.omega_M < mech.omega_m);
    CHECK(mod.kappa_M > mech.kappa_m);
  }
  const Complex srm = optical_spring(Topology::srm, r, nc, mech.omega_m);
  const Complex prm = optical_spring(Topology::prm, r, nc, mech.omega_m);
  CHECK(std::abs(srm / prm - r.gamma0 / r.gamma1) < 1e-12);
}

TEST_CASE("no coupling leaves the oscillator untouched") {
  const MechanicalOscillator mech = table_oscillator();
  const CavityRates r = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, kTau);
  const ModifiedOscillator mod = modified_oscillator(Topology::srm, r, NormalizedCouplings{}, mech);
  CHECK(mod.omega_M == mech.omega_m);
  CHECK(mod.kappa_M == mech.kappa_m);
  CHECK_THROWS_AS(Pump::make(0.0, OpticalCarrier{}), UnitError);
}

TEST_CASE("anti-damping and negative stiffness are rejected") {
  const MechanicalOscillator mech = table_oscillator();
  const CavityRates r = rates_from_bandwidths(two_pi * 1e5, two_pi * 1e6, kTau);
  CHECK_THROWS_AS(modified_oscillator(Topology::srm, r, NormalizedCouplings{1.0, -1.0}, mech),
                  UnstableSpring);
  CHECK_THROWS_AS(modified_oscillator(Topology::prm, r, NormalizedCouplings{1e3, 1e3}, mech),
                  UnstableSpring);
}

TEST_CASE("thermal force spectrum") {
  const MechanicalOscillator mech = table_oscillator();
  CHECK(mech.thermal_force_psd() ==
        doctest::Approx(4.0 * 5e-11 * mech.kappa_m * phys::k_B * 20.0));
  CHECK_THROWS_AS(MechanicalOscillator::make(-5e-11, 1.0, 1.0, 1.0), UnitError);
}

}
