#pragma once

// Linear input-output response of the optomechanical cavity and the derived
// spectral densities. Inputs are the two quadratures of the laser port B, the
// two quadratures of the signal port C and the thermal force F_T. All optical
// spectra are one-sided, symmetrized and normalized to shot noise (vacuum = 1).

#include <Eigen/Core>

#include "msi/cavity.hpp"
#include "msi/constants.hpp"

namespace msi {

enum Input : int { b_amplitude = 0, b_phase = 1, c_amplitude = 2, c_phase = 3, thermal_force = 4 };

/// Complex coefficients from (b_a, b_phi, c_a, c_phi, F_T) to one output.
using TransferRow = Eigen::Matrix<Complex, 1, 5>;

enum class ImpedanceModel {
  full,      // omega_m^2 + omega_os^2(Omega) - Omega^2 - i Omega kappa_m
  resonant,  // omega_M^2 - Omega^2 - i Omega kappa_M
};

/// Everything the transfer functions need for one configured system.
struct System {
  Topology topology = Topology::srm;
  CavityRates rates;
  NormalizedCouplings nc;
  MechanicalOscillator mech;
  ModifiedOscillator mod;
  ImpedanceModel impedance = ImpedanceModel::full;
};

Complex impedance(const System& sys, double omega);

/// Membrane displacement x in metres per unit input.
TransferRow displacement_transfer(const System& sys, double omega);

struct QuadratureRows {
  TransferRow amplitude;
  TransferRow phase;
};

/// Output amplitude and phase quadratures of C1. With `include_motion` false
/// only the direct reflection/transmission paths remain.
QuadratureRows output_transfer(const System& sys, double omega, bool include_motion = true);

/// Homodyne quadrature c1_theta = c1_a cos(theta) + c1_phi sin(theta).
TransferRow output_quadrature_transfer(const System& sys, double theta, double omega,
                                       bool include_motion = true);

struct InputNoise {
  double laser_amplitude = 1.0;  // PSD of b_a in shot units
  double laser_phase = 1.0;      // PSD of b_phi
  double squeeze_db = 0.0;       // on port C; negative = squeezed
  double squeeze_angle = 0.0;    // quadrature c_a cos + c_phi sin receiving squeeze_db
  double force_psd = 0.0;        // one-sided S_FT, N^2/Hz

  static InputNoise vacuum(const MechanicalOscillator& mech);

  Eigen::Matrix2d b_covariance() const;
  Eigen::Matrix2d c_covariance() const;
};

struct BudgetPoint {
  double shot = 0.0;     // zero-coupling floor of both ports
  double qrpn_c = 0.0;   // port C beyond its direct path
  double laser_b = 0.0;  // port B beyond its direct path
  double thermal = 0.0;
  double total = 0.0;
  double field_c = 0.0;  // everything carried by port C
};

BudgetPoint budget_point(const System& sys, double theta, const InputNoise& noise, double omega);

struct SpectrumBudget {
  Eigen::ArrayXd omega;
  Eigen::ArrayXd shot, qrpn_c, laser_b, thermal, total, field_c;
};

/// Throws std::invalid_argument unless the grid is positive and strictly increasing.
SpectrumBudget homodyne_spectrum(const System& sys, double theta, const InputNoise& noise,
                                 const Eigen::ArrayXd& omega_grid);

/// Closed-form QRPN force PSD of the back-action bracket for vacuum inputs.
double qrpn_psd(Topology topology, const CavityRates& rates, const NormalizedCouplings& nc,
                double omega_M);

/// Same bracket PSD evaluated from the displacement row with arbitrary input
/// states, normalized by sqrt(2 hbar m omega_M).
double back_action_psd(const System& sys, const InputNoise& noise, double omega);

enum class OccupancyModel { high_temperature, bose };

struct Occupancy {
  double n_T = 0.0;
  double T_eff = 0.0;  // K
};

Occupancy thermal_occupation(const MechanicalOscillator& mech, const ModifiedOscillator& mod,
                             double s_lp, OccupancyModel model = OccupancyModel::high_temperature);

/// QRPN to thermal phonon ratio for SRM with gamma1 >> gamma0.
double ba_to_thermal_ratio(const CavityRates& rates, const NormalizedCouplings& nc,
                           const MechanicalOscillator& mech);

/// Phase-quadrature terms for pure dispersive SRM readout (X = 0).
struct PhaseQuadratureTerms {
  double shot = 0.0;
  double qrpn = 0.0;
  double thermal = 0.0;
  double thermal_printed_prefactor = 0.0;  // 4x thermal, as typeset
};

PhaseQuadratureTerms phase_quadrature_closed_form(const System& sys, double omega);

/// tan(chi) = X/H for SRM, tan(beta) = H/X for PRM.
double correlation_angle(Topology topology, const NormalizedCouplings& nc);

/// Homodyne angle (and C quadrature) carrying the back action: chi for SRM,
/// beta + pi/2 for PRM.
double back_action_quadrature(Topology topology, const NormalizedCouplings& nc);

/// Port-C coefficient of c1_theta at the correlation angle, closed form.
Complex correlated_c_coefficient(const System& sys, double omega);

/// Same coefficient written as the ratio of numerator and impedance.
Complex correlated_c_ratio_form(const System& sys, double omega);

/// Port-C coefficient of c1_theta along the C quadrature at the same angle,
/// taken from the composed transfer rows.
Complex composed_c_coefficient(const System& sys, double theta, double omega);

/// Part of the composed coefficient missing from the closed form: the
/// -i Omega X c_phi term of the PRM displacement propagated to the output.
/// Zero for SRM.
Complex correlated_c_residual(const System& sys, double omega);

struct SqueezeFeatures {
  double omega_sq = 0.0;
  double Gamma_sq = 0.0;
  double omega_M = 0.0;
  double Gamma_M = 0.0;
  double separation = 0.0;           // |omega_sq - omega_M| / Gamma_M
  double separation_estimate = 0.0;  // gamma1-based approximation
  double theta_opt = 0.0;
  double correlation_angle = 0.0;  // chi (SRM) or beta (PRM)
  bool observable = false;         // separation > 1
};

SqueezeFeatures squeeze_features(const System& sys);

}  // namespace msi
