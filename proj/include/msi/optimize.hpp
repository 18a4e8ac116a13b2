#pragma once

// Optimal imbalance, sweeps that produce the cooling and squeezing curves,
// and the harness that checks every closed form against an independent route.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "msi/scenario.hpp"

namespace msi {

/// Imbalance maximizing eta * xi at the solved operating point.
double epsilon_opt(const MirrorSpec& mirror, double gamma0_tau);
/// Largest imbalance with a real operating point; eta vanishes there.
double epsilon_max(const MirrorSpec& mirror, double gamma0_tau);

enum class GridScale { linear, log };

struct SweepSpec {
  std::string parameter = "gamma0";
  double lo = 0.0;
  double hi = 0.0;
  int points = 2;
  GridScale scale = GridScale::log;

  void validate() const;
  Eigen::ArrayXd grid() const;
};

struct CoolingPoint {
  double gamma0 = 0.0;   // rad/s
  double epsilon = 0.0;
  double n_T = 0.0;      // NaN when not stable
  double kappa_M = 0.0;  // rad/s, NaN when not stable
  bool stable = false;
  std::string reason;
};

struct CoolingCurve {
  std::vector<CoolingPoint> points;

  /// Index of the smallest stable n_T, or -1.
  int minimum() const;
};

/// One cooling point per gamma0 in the sweep. With epsilon_mode opt or max the
/// imbalance is resolved per point.
CoolingCurve cooling_sweep(const Scenario& base, const SweepSpec& sweep);

struct EpsilonPoint {
  double epsilon = 0.0;
  double kappa_M = 0.0;
  double n_T = 0.0;
  bool valid = false;
};

/// Fixed-epsilon scan over [0, epsilon_max) with the given step.
std::vector<EpsilonPoint> epsilon_scan(const Scenario& base, double step);

/// Grid argmax of kappa_M over the scan, or NaN if no point is valid.
double argmax_kappa(const std::vector<EpsilonPoint>& scan);

struct Dip {
  double omega = 0.0;
  double value = 0.0;
};

/// Minimum of the port-C part of c1_theta over [lo, hi], coarse log scan
/// followed by Brent refinement.
Dip locate_dip(const System& sys, double theta, const InputNoise& noise, double lo, double hi);

/// Same with the default bracket [omega_m / 2, 2 gamma_plus] and vacuum input.
Dip locate_dip(const System& sys, double theta);

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  int errors = 0;  // draws rejected by a domain error
  std::string worst;
  bool passed = true;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// Throws VerificationFailed naming the first failing check.
  void require_passed() const;
};

VerifyReport verify_closed_forms(const Scenario& base, int samples, std::uint64_t seed);

}  // namespace msi
