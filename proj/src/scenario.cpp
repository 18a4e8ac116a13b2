#include "msi/scenario.hpp"

#include <cmath>

#include "msi/errors.hpp"
#include "msi/optimize.hpp"

namespace msi {

double resolved_epsilon(const Scenario& s) {
  const MirrorSpec mirror = MirrorSpec::from_power_reflectivity(s.reflectivity);
  const double g0tau = s.gamma0 * s.round_trip();
  switch (s.epsilon_mode) {
    case EpsilonMode::opt:
      return epsilon_opt(mirror, g0tau);
    case EpsilonMode::max:
      return epsilon_max(mirror, g0tau);
    case EpsilonMode::fixed:
      break;
  }
  return s.epsilon;
}

OperatingState evaluate(const Scenario& scenario) {
  OperatingState st;
  st.scenario = scenario;
  st.carrier.wavelength = scenario.wavelength;
  st.carrier.validate();
  st.mirror = MirrorSpec::from_power_reflectivity(scenario.reflectivity);
  st.bs.epsilon = resolved_epsilon(scenario);
  st.bs.validate();
  if (!(scenario.cavity_length > 0.0)) throw UnitError("cavity length must be positive");

  const double tau = scenario.round_trip();
  st.rates = rates_from_bandwidths(scenario.gamma0, scenario.gamma1, tau);
  st.transmission = std::sqrt(scenario.gamma0 * tau);
  if (!(st.transmission < 1.0)) throw UnitError("gamma0 * tau must be below 1");

  st.couplings = couplings_at_transmission(st.transmission, st.mirror, st.bs, st.carrier,
                                           scenario.cavity_length, &st.op);
  st.pump = Pump::make(scenario.power, st.carrier);
  st.pump.excess_amplitude = scenario.laser_excess_amplitude;
  st.pump.excess_phase = scenario.laser_excess_phase;

  const MechanicalOscillator mech = MechanicalOscillator::make(
      scenario.mass, scenario.omega_m, scenario.quality, scenario.temperature);
  st.nc = normalized_couplings(st.couplings, st.pump, mech, st.rates, st.carrier);

  st.system.topology = scenario.topology;
  st.system.rates = st.rates;
  st.system.nc = st.nc;
  st.system.mech = mech;
  st.system.mod = modified_oscillator(scenario.topology, st.rates, st.nc, mech);
  st.system.impedance = scenario.impedance;

  st.noise = InputNoise::vacuum(mech);
  st.noise.laser_amplitude = scenario.laser_excess_amplitude;
  st.noise.laser_phase = scenario.laser_excess_phase;
  st.noise.squeeze_db = scenario.squeeze_db;
  st.noise.squeeze_angle = scenario.squeeze_target == SqueezeTarget::backaction
                               ? back_action_quadrature(scenario.topology, st.nc)
                               : scenario.squeeze_angle;
  return st;
}

double back_action_at_resonance(const OperatingState& st) {
  return back_action_psd(st.system, st.noise, st.system.mod.omega_M);
}

Occupancy occupancy(const OperatingState& st) {
  return thermal_occupation(st.system.mech, st.system.mod, back_action_at_resonance(st),
                            st.scenario.occupancy);
}

LangevinModel langevin_model(const OperatingState& st) {
  LangevinModel m;
  m.topology = st.scenario.topology;
  m.rates = st.rates;
  m.couplings = st.couplings;
  m.mech = st.system.mech;
  m.power = st.pump.power;
  m.omega0 = st.carrier.omega0();
  return m;
}

}  // namespace msi
