#pragma once

// A fully specified operating point in SI units and the chain that turns it
// into couplings, rates, the spring-modified oscillator and input noise.

#include <string>
#include <vector>

#include "msi/cavity.hpp"
#include "msi/msi_core.hpp"
#include "msi/noise.hpp"
#include "msi/state_space.hpp"

namespace msi {

enum class EpsilonMode { fixed, opt, max };
enum class SqueezeTarget { backaction, angle };

struct Scenario {
  Topology topology = Topology::srm;
  double reflectivity = 0.98;  // membrane r_m^2
  EpsilonMode epsilon_mode = EpsilonMode::opt;
  double epsilon = 0.0;  // used when epsilon_mode == fixed
  double wavelength = 1550e-9;
  double cavity_length = 0.05;
  double gamma0 = two_pi * 1e5;
  double gamma1 = two_pi * 1e6;
  double power = 0.1;
  double mass = 5e-11;
  double omega_m = two_pi * 350e3;
  double quality = 1e6;
  double temperature = 20.0;
  double squeeze_db = 0.0;
  SqueezeTarget squeeze_target = SqueezeTarget::backaction;
  double squeeze_angle = 0.0;
  double laser_excess_amplitude = 1.0;
  double laser_excess_phase = 1.0;
  OccupancyModel occupancy = OccupancyModel::high_temperature;
  ImpedanceModel impedance = ImpedanceModel::full;

  double round_trip() const { return 2.0 * cavity_length / phys::c; }
};

struct OperatingState {
  Scenario scenario;
  OpticalCarrier carrier;
  MirrorSpec mirror;
  BeamSplitterSpec bs;
  OperatingPoint op;
  double transmission = 0.0;  // T_msi
  CouplingPair couplings;
  CavityRates rates;
  Pump pump;
  NormalizedCouplings nc;
  System system;
  InputNoise noise;

  const std::vector<std::string>& warnings() const { return system.mod.warnings; }
};

/// Resolve epsilon, solve x0 and build every derived quantity.
/// Propagates ImaginaryEta, DegenerateOperatingPoint and UnstableSpring.
OperatingState evaluate(const Scenario& scenario);

double resolved_epsilon(const Scenario& scenario);

/// S_LP at omega_M with the configured input noise and the resulting n_T.
double back_action_at_resonance(const OperatingState& state);
Occupancy occupancy(const OperatingState& state);

LangevinModel langevin_model(const OperatingState& state);

}  // namespace msi
