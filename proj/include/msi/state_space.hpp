#pragma once

// Time-domain Langevin equations of the cavity mode and the membrane written
// as ds/dt = M s + N u with s = (a_a, a_phi, x, v) and the same five inputs as
// the closed-form transfer rows. Solving (-i Omega - M) s = N u gives an
// independent route to the response.

#include <Eigen/Dense>

#include "msi/cavity.hpp"
#include "msi/noise.hpp"

namespace msi {

struct LangevinModel {
  Topology topology = Topology::srm;
  CavityRates rates;
  CouplingPair couplings;
  MechanicalOscillator mech;
  double power = 0.0;   // W
  double omega0 = 0.0;  // rad/s

  Eigen::Matrix4d drift() const;
  Eigen::Matrix<double, 4, 5> input() const;
  Eigen::Matrix<double, 2, 4> readout() const;
  Eigen::Matrix<double, 2, 5> feedthrough() const;
};

struct LangevinResponse {
  TransferRow displacement;
  TransferRow amplitude;
  TransferRow phase;
};

LangevinResponse langevin_response(const LangevinModel& model, double omega);

}  // namespace msi
