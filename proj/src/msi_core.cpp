#include "msi/msi_core.hpp"

#include <cmath>
#include <string>

#include "msi/errors.hpp"

namespace msi {

namespace {

constexpr double kDegenerateTransmission = 1e-9;
constexpr double kBoundarySnap = 1e-12;

}  // namespace

MirrorSpec MirrorSpec::from_power_reflectivity(double r2) {
  if (!(r2 >= 0.0 && r2 <= 1.0)) {
    throw UnitError("membrane power reflectivity must lie in [0, 1], got " + std::to_string(r2));
  }
  return MirrorSpec{std::sqrt(r2), std::sqrt(1.0 - r2)};
}

void MirrorSpec::validate() const {
  if (!(r >= 0.0 && r <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw UnitError("membrane amplitudes must lie in [0, 1]");
  }
  if (std::abs(r * r + t * t - 1.0) > 1e-12) {
    throw UnitError("membrane must be lossless: r^2 + t^2 = 1");
  }
}

void BeamSplitterSpec::validate() const {
  if (!(epsilon > -1.0 && epsilon < 1.0)) {
    throw UnitError("beam-splitter imbalance must lie in (-1, 1), got " + std::to_string(epsilon));
  }
}

void OpticalCarrier::validate() const {
  if (!(wavelength > 0.0)) throw UnitError("wavelength must be positive");
}

GeneralizedMirror generalized_mirror(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                     const OperatingPoint& op, const OpticalCarrier& carrier) {
  return generalized_mirror<double>(mirror.r, mirror.t, bs.epsilon, op.phase(carrier));
}

CouplingPair couplings_closed_form(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                   const OperatingPoint& op, const OpticalCarrier& carrier,
                                   double cavity_length) {
  const double phase = op.phase(carrier);
  const GeneralizedMirror gm = generalized_mirror<double>(mirror.r, mirror.t, bs.epsilon, phase);
  if (std::abs(gm.transmission) < kDegenerateTransmission) {
    throw DegenerateOperatingPoint("T_msi = " + std::to_string(gm.transmission) +
                                   " leaves eta undefined");
  }
  const double r2 = std::norm(gm.reflection);
  if (r2 == 0.0) throw DegenerateOperatingPoint("|R_msi| = 0 leaves xi undefined");

  const double root = std::sqrt(1.0 - bs.epsilon * bs.epsilon);
  CouplingPair c;
  c.xi = (mirror.t * gm.transmission + bs.epsilon) / (cavity_length * r2);
  c.eta = 4.0 * carrier.wavenumber() * mirror.r * root * std::cos(phase) / gm.transmission;
  return c;
}

namespace {

struct Slopes {
  long double eta;
  long double xi_im;  // Im(dR/R)
};

Slopes central_slopes(const MirrorSpec& mirror, const BeamSplitterSpec& bs, long double phase0,
                      long double k2, long double h) {
  using L = long double;
  const L r = mirror.r, t = mirror.t, eps = bs.epsilon;
  const auto at = [&](L dx) { return generalized_mirror<L>(r, t, eps, phase0 + k2 * dx); };
  const auto plus = at(h), minus = at(-h), mid = at(0);
  const L dT = (plus.transmission - minus.transmission) / (2 * h);
  const std::complex<L> dR = (plus.reflection - minus.reflection) / (2 * h);
  return Slopes{2 * dT / mid.transmission, (dR / mid.reflection).imag()};
}

double rel_diff(long double a, long double b) {
  const long double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : static_cast<double>(std::abs(a - b) / scale);
}

}  // namespace

DerivativeCouplings couplings_by_derivative_detailed(const MirrorSpec& mirror,
                                                     const BeamSplitterSpec& bs,
                                                     const OperatingPoint& op,
                                                     const OpticalCarrier& carrier, double tau,
                                                     double step) {
  const double phase = op.phase(carrier);
  const GeneralizedMirror gm = generalized_mirror<double>(mirror.r, mirror.t, bs.epsilon, phase);
  if (std::abs(gm.transmission) < kDegenerateTransmission) {
    throw DegenerateOperatingPoint("T_msi = " + std::to_string(gm.transmission) +
                                   " leaves eta undefined");
  }
  const long double k2 = 2.0L * static_cast<long double>(carrier.wavenumber());
  const Slopes fine = central_slopes(mirror, bs, phase, k2, step);
  const Slopes coarse = central_slopes(mirror, bs, phase, k2, 2.0L * step);

  const long double scale = 1.0L / (static_cast<long double>(carrier.omega0()) * tau);
  DerivativeCouplings out;
  out.value.eta = static_cast<double>(fine.eta);
  out.value.xi = static_cast<double>(fine.xi_im * scale);
  out.richardson_eta = rel_diff(fine.eta, coarse.eta);
  out.richardson_xi = rel_diff(fine.xi_im, coarse.xi_im);
  return out;
}

CouplingPair couplings_by_derivative(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                     const OperatingPoint& op, const OpticalCarrier& carrier,
                                     double tau, double step) {
  return couplings_by_derivative_detailed(mirror, bs, op, carrier, tau, step).value;
}

double required_sine(double target_transmission, const MirrorSpec& mirror,
                     const BeamSplitterSpec& bs) {
  const double denom = mirror.r * std::sqrt(1.0 - bs.epsilon * bs.epsilon);
  if (denom == 0.0) {
    throw Unsolvable("membrane reflectivity zero: T_msi does not depend on x0");
  }
  double s = (target_transmission + mirror.t * bs.epsilon) / denom;
  if (std::abs(std::abs(s) - 1.0) <= kBoundarySnap) s = std::copysign(1.0, s);
  return s;
}

OperatingPoint solve_operating_point(double target_transmission, const MirrorSpec& mirror,
                                     const BeamSplitterSpec& bs, const OpticalCarrier& carrier) {
  const double s = required_sine(target_transmission, mirror, bs);
  if (!(std::abs(s) <= 1.0)) {
    throw Unsolvable("T_msi = " + std::to_string(target_transmission) +
                     " unreachable: required sin 2kx0 = " + std::to_string(s));
  }
  return OperatingPoint{std::asin(s) / (2.0 * carrier.wavenumber())};
}

CouplingPair couplings_at_transmission(double target_transmission, const MirrorSpec& mirror,
                                       const BeamSplitterSpec& bs, const OpticalCarrier& carrier,
                                       double cavity_length, OperatingPoint* op_out) {
  OperatingPoint op;
  try {
    op = solve_operating_point(target_transmission, mirror, bs, carrier);
  } catch (const Unsolvable& e) {
    throw ImaginaryEta(std::string("epsilon = ") + std::to_string(bs.epsilon) +
                       " exceeds epsilon_max: " + e.what());
  }
  if (op_out) *op_out = op;
  return couplings_closed_form(mirror, bs, op, carrier, cavity_length);
}

}  // namespace msi
