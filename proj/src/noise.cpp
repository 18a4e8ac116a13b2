#include "msi/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "msi/errors.hpp"

namespace msi {

namespace {

const Complex kI(0.0, 1.0);

// k^H S k for a real symmetric 2x2 covariance.
double quadratic_psd(const Complex& k0, const Complex& k1, const Eigen::Matrix2d& cov) {
  return cov(0, 0) * std::norm(k0) + cov(1, 1) * std::norm(k1) +
         2.0 * cov(0, 1) * (std::conj(k0) * k1).real();
}

double port_b_psd(const TransferRow& row, const InputNoise& noise) {
  return quadratic_psd(row(b_amplitude), row(b_phase), noise.b_covariance());
}

double port_c_psd(const TransferRow& row, const InputNoise& noise) {
  return quadratic_psd(row(c_amplitude), row(c_phase), noise.c_covariance());
}

double hbar_over_mass(const System& sys) { return phys::hbar / sys.mech.mass; }

}  // namespace

Complex impedance(const System& sys, double omega) {
  if (sys.impedance == ImpedanceModel::resonant) {
    const double wM = sys.mod.omega_M;
    return Complex(wM * wM - omega * omega, -omega * sys.mod.kappa_M);
  }
  const double wm = sys.mech.omega_m;
  return Complex(wm * wm - omega * omega, -omega * sys.mech.kappa_m) +
         optical_spring(sys.topology, sys.rates, sys.nc, omega);
}

TransferRow displacement_transfer(const System& sys, double omega) {
  const CavityRates& r = sys.rates;
  const double X = sys.nc.X, H = sys.nc.H;
  const Complex Z = impedance(sys, omega);
  const Complex filter = Complex(r.gamma_plus, -omega);
  const double root = std::sqrt(hbar_over_mass(sys));

  TransferRow row = TransferRow::Zero();
  if (sys.topology == Topology::srm) {
    const Complex p = -root * r.gamma0 * r.gamma_plus / (filter * Z);
    const double ratio = std::sqrt(r.gamma1 / r.gamma0);
    row(b_amplitude) = p * H;
    row(b_phase) = p * X * kI * omega / r.gamma_plus;
    row(c_amplitude) = p * H * ratio;
    row(c_phase) = p * X * ratio;
  } else {
    const Complex s = root / Z;
    const Complex dispersive = -s * r.gamma_plus * H / filter;
    row(b_amplitude) = dispersive * r.gamma1;
    row(c_amplitude) = dispersive * std::sqrt(r.gamma0 * r.gamma1);
    row(c_phase) = s * std::sqrt(r.gamma0 * r.gamma1) * X;
  }
  row(thermal_force) = 1.0 / (sys.mech.mass * Z);
  return row;
}

QuadratureRows output_transfer(const System& sys, double omega, bool include_motion) {
  const CavityRates& r = sys.rates;
  const Complex filter = Complex(r.gamma_plus, -omega);
  const double g01 = std::sqrt(r.gamma0 * r.gamma1);
  const bool srm = sys.topology == Topology::srm;

  const Complex reflect = (srm ? Complex(r.gamma_minus, omega) : Complex(-r.gamma_minus, omega)) / filter;
  const Complex transmit = g01 / filter;

  QuadratureRows rows{TransferRow::Zero(), TransferRow::Zero()};
  rows.amplitude(b_amplitude) = transmit;
  rows.amplitude(c_amplitude) = reflect;
  rows.phase(b_phase) = transmit;
  rows.phase(c_phase) = reflect;
  if (!include_motion) return rows;

  const double root = std::sqrt(1.0 / hbar_over_mass(sys));
  const Complex amp_gain = srm ? root * g01 * r.gamma_minus * sys.nc.X / filter
                               : root * g01 * Complex(r.gamma_minus, -omega) * sys.nc.X / filter;
  const Complex phase_gain = -root * g01 * r.gamma_plus * sys.nc.H / filter;

  const TransferRow x = displacement_transfer(sys, omega);
  rows.amplitude += amp_gain * x;
  rows.phase += phase_gain * x;
  return rows;
}

TransferRow output_quadrature_transfer(const System& sys, double theta, double omega,
                                       bool include_motion) {
  const QuadratureRows rows = output_transfer(sys, omega, include_motion);
  return std::cos(theta) * rows.amplitude + std::sin(theta) * rows.phase;
}

InputNoise InputNoise::vacuum(const MechanicalOscillator& mech) {
  InputNoise n;
  n.force_psd = mech.thermal_force_psd();
  return n;
}

Eigen::Matrix2d InputNoise::b_covariance() const {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = laser_amplitude;
  cov(1, 1) = laser_phase;
  return cov;
}

Eigen::Matrix2d InputNoise::c_covariance() const {
  const double gain = std::pow(10.0, squeeze_db / 10.0);
  const Eigen::Vector2d u(std::cos(squeeze_angle), std::sin(squeeze_angle));
  const Eigen::Vector2d v(-u.y(), u.x());
  return gain * u * u.transpose() + (1.0 / gain) * v * v.transpose();
}

BudgetPoint budget_point(const System& sys, double theta, const InputNoise& noise, double omega) {
  const TransferRow full = output_quadrature_transfer(sys, theta, omega, true);
  const TransferRow direct = output_quadrature_transfer(sys, theta, omega, false);

  const double direct_b = port_b_psd(direct, noise);
  const double direct_c = port_c_psd(direct, noise);
  BudgetPoint p;
  p.shot = direct_b + direct_c;
  p.field_c = port_c_psd(full, noise);
  p.qrpn_c = p.field_c - direct_c;
  p.laser_b = port_b_psd(full, noise) - direct_b;
  p.thermal = std::norm(full(thermal_force)) * noise.force_psd;
  p.total = p.shot + p.qrpn_c + p.laser_b + p.thermal;
  return p;
}

SpectrumBudget homodyne_spectrum(const System& sys, double theta, const InputNoise& noise,
                                 const Eigen::ArrayXd& omega_grid) {
  const Eigen::Index n = omega_grid.size();
  if (n == 0) throw std::invalid_argument("frequency grid is empty");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(omega_grid(i) > 0.0) || (i > 0 && !(omega_grid(i) > omega_grid(i - 1)))) {
      throw std::invalid_argument("frequency grid must be positive and strictly increasing");
    }
  }
  SpectrumBudget s;
  s.omega = omega_grid;
  for (auto* a : {&s.shot, &s.qrpn_c, &s.laser_b, &s.thermal, &s.total, &s.field_c}) a->resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BudgetPoint p = budget_point(sys, theta, noise, omega_grid(i));
    s.shot(i) = p.shot;
    s.qrpn_c(i) = p.qrpn_c;
    s.laser_b(i) = p.laser_b;
    s.thermal(i) = p.thermal;
    s.total(i) = p.total;
    s.field_c(i) = p.field_c;
  }
  return s;
}

double qrpn_psd(Topology topology, const CavityRates& r, const NormalizedCouplings& nc,
                double omega_M) {
  const double gp2 = r.gamma_plus * r.gamma_plus, w2 = omega_M * omega_M;
  const double X2 = nc.X * nc.X, H2 = nc.H * nc.H;
  if (topology == Topology::srm) {
    return r.gamma0 * r.gamma0 / (2.0 * omega_M) * gp2 / (gp2 + w2) *
           (H2 * (1.0 + r.gamma1 / r.gamma0) + X2 * (r.gamma1 / r.gamma0 + w2 / gp2));
  }
  return r.gamma1 * r.gamma1 / (2.0 * omega_M) *
         (H2 * gp2 / (gp2 + w2) * (1.0 + r.gamma0 / r.gamma1) + X2 * (r.gamma0 / r.gamma1));
}

double back_action_psd(const System& sys, const InputNoise& noise, double omega) {
  const TransferRow x = displacement_transfer(sys, omega);
  const double optical = port_b_psd(x, noise) + port_c_psd(x, noise);
  const double m = sys.mech.mass;
  return optical * m * std::norm(impedance(sys, omega)) / (2.0 * phys::hbar * sys.mod.omega_M);
}

Occupancy thermal_occupation(const MechanicalOscillator& mech, const ModifiedOscillator& mod,
                             double s_lp, OccupancyModel model) {
  if (!(mod.kappa_M > 0.0)) throw UnstableSpring("kappa_M must be positive for a steady state");
  const double quantum = phys::hbar * mod.omega_M;
  const double thermal = phys::k_B * mech.temperature;
  const double bath = model == OccupancyModel::bose ? 1.0 / std::expm1(quantum / thermal)
                                                     : thermal / quantum;
  Occupancy occ;
  occ.n_T = mech.kappa_m / mod.kappa_M * bath + s_lp / (2.0 * mod.kappa_M);
  occ.T_eff = occ.n_T * quantum / phys::k_B;
  return occ;
}

double ba_to_thermal_ratio(const CavityRates& r, const NormalizedCouplings& nc,
                           const MechanicalOscillator& mech) {
  const double gp2 = r.gamma_plus * r.gamma_plus;
  const double wm2 = mech.omega_m * mech.omega_m;
  return phys::hbar * r.gamma0 * r.gamma1 * gp2 * (nc.H * nc.H + nc.X * nc.X) /
         (4.0 * mech.kappa_m * phys::k_B * mech.temperature * (gp2 + wm2));
}

PhaseQuadratureTerms phase_quadrature_closed_form(const System& sys, double omega) {
  const CavityRates& r = sys.rates;
  const double gp2 = r.gamma_plus * r.gamma_plus, w2 = omega * omega;
  const double lorentz = gp2 + w2;
  const double Z2 = std::norm(impedance(sys, omega));
  const double H2 = sys.nc.H * sys.nc.H;
  const double g0g1 = r.gamma0 * r.gamma1;

  PhaseQuadratureTerms t;
  t.shot = (g0g1 + r.gamma_minus * r.gamma_minus + w2) / lorentz;
  t.qrpn = H2 * H2 * r.gamma0 * r.gamma0 * r.gamma1 / Z2 * gp2 * gp2 / (lorentz * lorentz) *
           (r.gamma0 + r.gamma1);
  t.thermal = 4.0 * H2 * gp2 / lorentz * g0g1 / Z2 * sys.mech.kappa_m * phys::k_B *
              sys.mech.temperature / phys::hbar;
  t.thermal_printed_prefactor = 4.0 * t.thermal;
  return t;
}

double correlation_angle(Topology topology, const NormalizedCouplings& nc) {
  return topology == Topology::srm ? std::atan2(nc.X, nc.H) : std::atan2(nc.H, nc.X);
}

double back_action_quadrature(Topology topology, const NormalizedCouplings& nc) {
  const double angle = correlation_angle(topology, nc);
  return topology == Topology::srm ? angle : angle + 0.5 * std::numbers::pi;
}

Complex correlated_c_coefficient(const System& sys, double omega) {
  const CavityRates& r = sys.rates;
  const Complex filter(r.gamma_plus, -omega);
  const Complex Z = impedance(sys, omega);
  const double XH = sys.nc.X * sys.nc.H;
  if (sys.topology == Topology::srm) {
    return Complex(r.gamma_minus, omega) / filter +
           r.gamma0 * r.gamma0 * r.gamma1 * r.gamma_plus * XH / (Z * filter * filter);
  }
  return Complex(-r.gamma_minus, omega) / filter -
         r.gamma0 * r.gamma1 * r.gamma_plus * XH * Complex(r.gamma1, -omega) / (Z * filter * filter);
}

Complex correlated_c_ratio_form(const System& sys, double omega) {
  const CavityRates& r = sys.rates;
  const Complex filter(r.gamma_plus, -omega);
  const double XH = sys.nc.X * sys.nc.H;
  const double wm2 = sys.mech.omega_m * sys.mech.omega_m;
  const Complex bare(wm2 - omega * omega, -omega * sys.mech.kappa_m);
  if (sys.topology == Topology::srm) {
    const double k = r.gamma0 * r.gamma0 * r.gamma_plus * XH;
    const Complex lead = Complex(r.gamma_minus, omega) / filter;
    return lead * (bare + k / Complex(r.gamma_minus, omega)) / (bare - k / filter);
  }
  const double k = r.gamma0 * r.gamma1 * r.gamma_plus * XH;
  const Complex lead = Complex(-r.gamma_minus, omega) / filter;
  return lead * (bare + k * r.gamma_plus / (Complex(r.gamma_minus, -omega) * filter)) /
         (bare - k / filter);
}

Complex composed_c_coefficient(const System& sys, double theta, double omega) {
  const TransferRow row = output_quadrature_transfer(sys, theta, omega, true);
  return std::cos(theta) * row(c_amplitude) + std::sin(theta) * row(c_phase);
}

Complex correlated_c_residual(const System& sys, double omega) {
  if (sys.topology == Topology::srm) return Complex(0.0, 0.0);
  const CavityRates& r = sys.rates;
  const Complex filter(r.gamma_plus, -omega);
  const double X = sys.nc.X, H = sys.nc.H;
  const double n2 = X * X + H * H;
  if (n2 == 0.0) return Complex(0.0, 0.0);
  return r.gamma0 * r.gamma1 * X * X * X * H * Complex(r.gamma1, -omega) * kI * omega /
         (n2 * impedance(sys, omega) * filter * filter);
}

SqueezeFeatures squeeze_features(const System& sys) {
  const CavityRates& r = sys.rates;
  const double wm = sys.mech.omega_m, wm2 = wm * wm;
  const double XH = sys.nc.X * sys.nc.H;

  SqueezeFeatures f;
  f.omega_M = sys.mod.omega_M;
  f.Gamma_M = sys.mod.kappa_M;
  f.correlation_angle = correlation_angle(sys.topology, sys.nc);
  f.theta_opt = back_action_quadrature(sys.topology, sys.nc);

  double shift = 0.0, widening = 0.0;
  if (sys.topology == Topology::srm) {
    const double gm2 = r.gamma_minus * r.gamma_minus;
    shift = r.gamma_plus * r.gamma_minus * r.gamma0 * r.gamma0 * XH / (gm2 + wm2);
    widening = r.gamma_plus * r.gamma0 * r.gamma0 * XH / (gm2 + wm2);
    f.separation_estimate = r.gamma1 / (2.0 * wm);
  } else {
    const Complex term = r.gamma0 * r.gamma1 * r.gamma_plus * r.gamma_plus * XH /
                         (Complex(r.gamma_minus, -wm) * Complex(r.gamma_plus, -wm));
    shift = term.real();
    widening = term.imag() / wm;
    f.separation_estimate = r.gamma1 / (2.0 * wm * (1.0 + 4.0 * wm2 / (r.gamma0 * r.gamma0)));
  }
  const double wsq2 = wm2 + shift;
  if (!(wsq2 > 0.0)) throw UnstableSpring("squeezing frequency is imaginary");
  f.omega_sq = std::sqrt(wsq2);
  f.Gamma_sq = sys.mech.kappa_m + widening;
  f.separation = std::abs(f.omega_sq - f.omega_M) / f.Gamma_M;
  f.observable = f.separation > 1.0;
  return f;
}

}  // namespace msi
