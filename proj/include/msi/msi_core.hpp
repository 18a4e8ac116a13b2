#pragma once

// Generalized-mirror algebra of the Michelson-Sagnac interferometer.
//
// The interferometer with a movable, partially transmissive membrane and an
// imbalanced central beam splitter acts as a single mirror with transmission
// T_msi (real) and reflection R_msi (complex). Displacing the membrane changes
// both, which yields a dispersive coupling xi (cavity frequency shift) and a
// dissipative coupling eta (cavity relaxation-rate shift).

#include <cmath>
#include <complex>

#include "msi/constants.hpp"

namespace msi {

struct MirrorSpec {
  double r = 1.0;  // amplitude reflectivity
  double t = 0.0;  // amplitude transmissivity

  /// Lossless membrane from its power reflectivity r^2.
  static MirrorSpec from_power_reflectivity(double r2);
  void validate() const;
};

struct BeamSplitterSpec {
  double epsilon = 0.0;  // r_bs^2 - t_bs^2, in (-1, 1)

  double r_bs2() const { return 0.5 * (1.0 + epsilon); }
  double t_bs2() const { return 0.5 * (1.0 - epsilon); }
  void validate() const;
};

struct OpticalCarrier {
  double wavelength = 1550e-9;  // m

  double omega0() const { return two_pi * phys::c / wavelength; }
  double wavenumber() const { return two_pi / wavelength; }
  void validate() const;
};

struct OperatingPoint {
  double x0 = 0.0;  // mean membrane offset, m

  /// Round-trip phase 2 k x0.
  double phase(const OpticalCarrier& carrier) const { return 2.0 * carrier.wavenumber() * x0; }
};

template <class Scalar>
struct GeneralizedMirrorT {
  Scalar transmission;
  std::complex<Scalar> reflection;
};

using GeneralizedMirror = GeneralizedMirrorT<double>;

/// T_msi and R_msi at round-trip phase 2kx0 = `phase`.
template <class Scalar>
GeneralizedMirrorT<Scalar> generalized_mirror(Scalar r, Scalar t, Scalar epsilon, Scalar phase) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar root = sqrt(Scalar(1) - epsilon * epsilon);
  const Scalar s = sin(phase);
  const Scalar c = cos(phase);
  GeneralizedMirrorT<Scalar> gm;
  gm.transmission = r * root * s - t * epsilon;
  gm.reflection = std::complex<Scalar>(r * c, r * epsilon * s + t * root);
  return gm;
}

GeneralizedMirror generalized_mirror(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                     const OperatingPoint& op, const OpticalCarrier& carrier);

struct CouplingPair {
  double xi = 0.0;   // dispersive, 1/m
  double eta = 0.0;  // dissipative, 1/m
};

/// Closed-form xi and eta. Throws DegenerateOperatingPoint when |T_msi| < 1e-9.
CouplingPair couplings_closed_form(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                   const OperatingPoint& op, const OpticalCarrier& carrier,
                                   double cavity_length);

inline constexpr double kDefaultDerivativeStep = 1e-15;  // m

struct DerivativeCouplings {
  CouplingPair value;
  // Relative disagreement between central differences at h and 2h.
  double richardson_xi = 0.0;
  double richardson_eta = 0.0;
};

/// eta = 2 dT/T and xi = Im(dR/R)/(omega0 tau) by central differences of the
/// mirror in long double.
DerivativeCouplings couplings_by_derivative_detailed(const MirrorSpec& mirror,
                                                     const BeamSplitterSpec& bs,
                                                     const OperatingPoint& op,
                                                     const OpticalCarrier& carrier, double tau,
                                                     double step = kDefaultDerivativeStep);

CouplingPair couplings_by_derivative(const MirrorSpec& mirror, const BeamSplitterSpec& bs,
                                     const OperatingPoint& op, const OpticalCarrier& carrier,
                                     double tau, double step = kDefaultDerivativeStep);

/// x0 with T_msi(x0) = target_transmission on the branch cos 2kx0 >= 0.
/// Throws Unsolvable when the required sine leaves [-1, 1].
OperatingPoint solve_operating_point(double target_transmission, const MirrorSpec& mirror,
                                     const BeamSplitterSpec& bs, const OpticalCarrier& carrier);

/// Sine of 2kx0 needed to reach `target_transmission`.
double required_sine(double target_transmission, const MirrorSpec& mirror,
                     const BeamSplitterSpec& bs);

/// Solve the operating point and return the closed-form couplings there.
/// Imbalance beyond the reachable range is reported as ImaginaryEta.
CouplingPair couplings_at_transmission(double target_transmission, const MirrorSpec& mirror,
                                       const BeamSplitterSpec& bs, const OpticalCarrier& carrier,
                                       double cavity_length, OperatingPoint* op_out = nullptr);

}  // namespace msi
