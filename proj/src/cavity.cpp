#include "msi/cavity.hpp"

#include <cmath>
#include <sstream>

#include "msi/errors.hpp"

namespace msi {

namespace {

// "much less than" used for the resonance-approximation warnings.
constexpr double kMuchLess = 0.3;
constexpr double kRefinementTolerance = 1e-3;

}  // namespace

const char* to_string(Topology topology) { return topology == Topology::srm ? "SRM" : "PRM"; }

CavityRates rates_from_bandwidths(double gamma0, double gamma1, double tau) {
  if (!(gamma0 > 0.0 && gamma1 > 0.0 && tau > 0.0)) {
    throw UnitError("cavity rates and round-trip time must be positive");
  }
  CavityRates r;
  r.gamma0 = gamma0;
  r.gamma1 = gamma1;
  r.gamma_plus = 0.5 * (gamma1 + gamma0);
  r.gamma_minus = 0.5 * (gamma1 - gamma0);
  r.tau = tau;
  return r;
}

CavityRates cavity_rates(double t_msi, double t_recycling, double tau) {
  if (!(t_msi > 0.0 && t_msi < 1.0 && t_recycling > 0.0 && t_recycling < 1.0)) {
    throw UnitError("mirror transmissions must lie in (0, 1)");
  }
  return rates_from_bandwidths(t_msi * t_msi / tau, t_recycling * t_recycling / tau, tau);
}

MechanicalOscillator MechanicalOscillator::make(double mass, double omega_m, double quality,
                                                double temperature) {
  if (!(mass > 0.0 && omega_m > 0.0 && quality > 0.0 && temperature > 0.0)) {
    throw UnitError("oscillator mass, frequency, Q and temperature must be positive");
  }
  return MechanicalOscillator{mass, omega_m, omega_m / quality, quality, temperature};
}

double MechanicalOscillator::thermal_force_psd() const {
  return 4.0 * mass * kappa_m * phys::k_B * temperature;
}

Pump Pump::make(double power, const OpticalCarrier& carrier) {
  if (!(power > 0.0)) throw UnitError("input power must be positive");
  Pump p;
  p.power = power;
  p.amplitude = std::sqrt(power / (phys::hbar * carrier.omega0()));
  return p;
}

MeanFields mean_fields(Topology topology, const CavityRates& rates, const Pump& pump) {
  const double g0 = rates.gamma0, g1 = rates.gamma1, sum = g0 + g1;
  const double B = pump.amplitude;
  MeanFields f;
  if (topology == Topology::srm) {
    f.intracavity = 2.0 * std::sqrt(g0) * B / sum;
    f.reflected = (g0 - g1) / sum * B;
  } else {
    f.intracavity = 2.0 * std::sqrt(g1) * B / sum;
    f.reflected = (g1 - g0) / sum * B;
  }
  f.output = 2.0 * std::sqrt(g0 * g1) / sum * B;
  return f;
}

NormalizedCouplings normalized_couplings(const CouplingPair& c, const Pump& pump,
                                         const MechanicalOscillator& mech,
                                         const CavityRates& rates, const OpticalCarrier& carrier) {
  const double w0 = carrier.omega0();
  const double gp2 = rates.gamma_plus * rates.gamma_plus;
  NormalizedCouplings nc;
  nc.X = c.eta * std::sqrt(pump.power / (2.0 * mech.mass * w0 * gp2));
  nc.H = c.xi * std::sqrt(2.0 * w0 * pump.power / (mech.mass * gp2 * gp2));
  return nc;
}

namespace {

double topology_gain(Topology topology, const CavityRates& rates) {
  return topology == Topology::srm ? rates.gamma0 * rates.gamma0 : rates.gamma0 * rates.gamma1;
}

}  // namespace

Complex optical_spring(Topology topology, const CavityRates& rates, const CouplingPair& c,
                       const Pump& pump, const MechanicalOscillator& mech, double omega) {
  const double gp = rates.gamma_plus;
  const double k = pump.power * topology_gain(topology, rates) * c.eta * c.xi / (mech.mass * gp * gp);
  return -k / Complex(gp, -omega);
}

Complex optical_spring(Topology topology, const CavityRates& rates,
                       const NormalizedCouplings& nc, double omega) {
  // W eta xi / (m g+^3) = X H
  const double gp = rates.gamma_plus;
  const double k = topology_gain(topology, rates) * gp * nc.X * nc.H;
  return -k / Complex(gp, -omega);
}

ModifiedOscillator modified_oscillator(Topology topology, const CavityRates& rates,
                                       const NormalizedCouplings& nc,
                                       const MechanicalOscillator& mech) {
  const double wm2 = mech.omega_m * mech.omega_m;
  const auto resonance = [&](double omega) {
    const double w2 = wm2 + optical_spring(topology, rates, nc, omega).real();
    if (!(w2 > 0.0)) {
      std::ostringstream msg;
      msg << "optical spring drives omega_M^2 to " << w2 << " rad^2/s^2";
      throw UnstableSpring(msg.str());
    }
    return std::sqrt(w2);
  };

  const double first = resonance(mech.omega_m);
  ModifiedOscillator mod;
  mod.omega_M = resonance(first);
  mod.refinement_shift = std::abs(mod.omega_M - first) / mod.omega_M;
  mod.omega_os_sq = optical_spring(topology, rates, nc, mod.omega_M);
  mod.kappa_M = mech.kappa_m - mod.omega_os_sq.imag() / mod.omega_M;
  if (!(mod.kappa_M > 0.0)) {
    std::ostringstream msg;
    msg << "optical anti-damping drives kappa_M to " << mod.kappa_M << " rad/s";
    throw UnstableSpring(msg.str());
  }

  if (mod.refinement_shift >= kRefinementTolerance) {
    mod.warnings.push_back("omega_M moved by more than 1e-3 on refinement");
  }
  if (phys::k_B * mech.temperature * kMuchLess < phys::hbar * mod.omega_M) {
    mod.warnings.push_back("k_B T0 is not much larger than hbar omega_M");
  }
  if (mech.kappa_m > kMuchLess * mech.omega_m || mod.kappa_M > kMuchLess * mech.omega_m) {
    mod.warnings.push_back("mechanical linewidth is not much smaller than omega_m");
  }
  if (mod.omega_M > kMuchLess * rates.gamma_plus) {
    mod.warnings.push_back("omega_M is not much smaller than gamma_plus");
  }
  return mod;
}

ModifiedOscillator modified_oscillator(Topology topology, const CavityRates& rates,
                                       const CouplingPair& c, const Pump& pump,
                                       const MechanicalOscillator& mech,
                                       const OpticalCarrier& carrier) {
  return modified_oscillator(topology, rates, normalized_couplings(c, pump, mech, rates, carrier),
                             mech);
}

}  // namespace msi
