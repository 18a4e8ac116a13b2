#pragma once

// Line-oriented "key = value" configuration. Frequencies are ordinary (Hz),
// lengths and masses use the units in the key name; everything is converted
// to SI rad/s on the way into a Scenario.

#include <string>

#include <Eigen/Core>

#include "msi/optimize.hpp"
#include "msi/scenario.hpp"

namespace msi {

enum class HomodyneMode { auto_select, radians, chi, beta_plus_90, phase, amplitude };

struct HomodyneChoice {
  HomodyneMode mode = HomodyneMode::auto_select;
  double radians = 0.0;

  bool operator==(const HomodyneChoice&) const = default;
};

struct ModelConfig {
  Topology topology = Topology::srm;
  double mirror_reflectivity = 0.98;
  double baseline_reflectivity = 0.5;
  double epsilon = 0.0;
  EpsilonMode epsilon_mode = EpsilonMode::opt;
  double epsilon_step = 1e-3;

  double wavelength_nm = 1550.0;
  double cavity_length_cm = 5.0;
  double gamma1_over_2pi_Hz = 1e6;
  double gamma0_over_2pi_Hz = 1e5;
  double input_power_W = 0.1;

  double sweep_gamma0_min_Hz = 1e4;
  double sweep_gamma0_max_Hz = 3e6;
  int sweep_points = 200;
  GridScale sweep_scale = GridScale::log;

  double mass_ng = 50.0;
  double freq_mech_kHz = 350.0;
  double Q = 1e6;
  double temperature_K = 20.0;

  double squeeze_dB = 0.0;
  SqueezeTarget squeeze_target = SqueezeTarget::backaction;
  double squeeze_angle_rad = 0.0;
  HomodyneChoice homodyne_angle;
  double laser_excess_amplitude = 1.0;
  double laser_excess_phase = 1.0;
  OccupancyModel occupancy_mode = OccupancyModel::high_temperature;
  ImpedanceModel impedance = ImpedanceModel::full;

  double spectrum_min_Hz = 1e4;
  double spectrum_max_Hz = 3e6;
  int spectrum_points = 400;
  int spectrum_resonance_points = 201;

  int verify_samples = 100;
  long long verify_seed = 12345;

  bool operator==(const ModelConfig&) const = default;
};

/// Throws ParseError (with line number) for syntax errors, unknown keys and
/// malformed values; UnitError for values outside their physical range.
ModelConfig parse_config(const std::string& text);

/// Apply one "key=value" override on top of a parsed config.
void apply_override(ModelConfig& config, const std::string& assignment);

/// Every key in canonical order; parse_config(echo_config(c)) == c.
std::string echo_config(const ModelConfig& config);

void validate(const ModelConfig& config);

Scenario to_scenario(const ModelConfig& config);
SweepSpec gamma0_sweep(const ModelConfig& config);
/// Log grid over the spectrum range merged with a linear grid of
/// +-20 kappa_M around omega_M, rad/s.
Eigen::ArrayXd spectrum_grid(const ModelConfig& config, double omega_M, double kappa_M);

/// Resolve the homodyne angle; `automatic` is used for HomodyneMode::auto_select.
double homodyne_angle(const ModelConfig& config, const NormalizedCouplings& nc, double automatic);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace msi
