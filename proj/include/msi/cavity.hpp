#pragma once

// Cavity formed by the interferometer (generalized mirror) and a recycling
// mirror. In the SRM topology the pump enters through the interferometer and
// the signal port C is closed by the recycling mirror; in the PRM topology the
// pump enters through the recycling mirror and C leaves through the
// interferometer.

#include <string>
#include <vector>

#include "msi/constants.hpp"
#include "msi/msi_core.hpp"

namespace msi {

enum class Topology { srm, prm };

const char* to_string(Topology topology);

struct CavityRates {
  double gamma0 = 0.0;  // interferometer-side half-width, rad/s
  double gamma1 = 0.0;  // recycling-mirror half-width, rad/s
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double tau = 0.0;  // round trip, s
};

/// Rates from amplitude transmissions of both mirrors and the round-trip time.
CavityRates cavity_rates(double t_msi, double t_recycling, double tau);
/// Rates given directly in rad/s.
CavityRates rates_from_bandwidths(double gamma0, double gamma1, double tau);

struct MechanicalOscillator {
  double mass = 0.0;         // kg
  double omega_m = 0.0;      // rad/s
  double kappa_m = 0.0;      // rad/s, omega_m / Q
  double quality = 0.0;      // Q
  double temperature = 0.0;  // K

  static MechanicalOscillator make(double mass, double omega_m, double quality,
                                   double temperature);
  /// One-sided thermal force PSD 4 m kappa_m k_B T, N^2/Hz.
  double thermal_force_psd() const;
};

struct Pump {
  double power = 0.0;      // W_in, W
  double amplitude = 0.0;  // B, sqrt(photons/s)
  // PSD multipliers on the laser amplitude/phase quadratures (1 = coherent).
  double excess_amplitude = 1.0;
  double excess_phase = 1.0;

  static Pump make(double power, const OpticalCarrier& carrier);
};

struct MeanFields {
  double intracavity = 0.0;  // A
  double reflected = 0.0;    // B1
  double output = 0.0;       // C1
};

MeanFields mean_fields(Topology topology, const CavityRates& rates, const Pump& pump);

/// Dimensionless dissipative (X) and dispersive (H) coupling rates.
struct NormalizedCouplings {
  double X = 0.0;
  double H = 0.0;
};

NormalizedCouplings normalized_couplings(const CouplingPair& c, const Pump& pump,
                                         const MechanicalOscillator& mech,
                                         const CavityRates& rates, const OpticalCarrier& carrier);

/// Complex optical spring omega_os^2(Omega) under resonant pumping.
Complex optical_spring(Topology topology, const CavityRates& rates, const CouplingPair& c,
                       const Pump& pump, const MechanicalOscillator& mech, double omega);

/// Same spring written through the normalized couplings.
Complex optical_spring(Topology topology, const CavityRates& rates,
                       const NormalizedCouplings& nc, double omega);

struct ModifiedOscillator {
  Complex omega_os_sq;  // at omega_M
  double omega_M = 0.0;
  double kappa_M = 0.0;
  // |omega_M(refined) - omega_M(first pass)| / omega_M
  double refinement_shift = 0.0;
  std::vector<std::string> warnings;
};

/// Evaluate the spring at omega_m, refine once at omega_M.
/// Throws UnstableSpring when omega_M^2 <= 0 or kappa_M <= 0.
ModifiedOscillator modified_oscillator(Topology topology, const CavityRates& rates,
                                       const NormalizedCouplings& nc,
                                       const MechanicalOscillator& mech);

ModifiedOscillator modified_oscillator(Topology topology, const CavityRates& rates,
                                       const CouplingPair& c, const Pump& pump,
                                       const MechanicalOscillator& mech,
                                       const OpticalCarrier& carrier);

}  // namespace msi
