#include "msi/state_space.hpp"

#include <cmath>
#include <numbers>

namespace msi {

namespace {

struct Amplitudes {
  double pump;
  double cavity;
};

Amplitudes amplitudes(const LangevinModel& m) {
  Pump pump;
  pump.power = m.power;
  pump.amplitude = std::sqrt(m.power / (phys::hbar * m.omega0));
  return {pump.amplitude, mean_fields(m.topology, m.rates, pump).intracavity};
}

}  // namespace

Eigen::Matrix4d LangevinModel::drift() const {
  const auto [B, A] = amplitudes(*this);
  const double g0 = rates.gamma0, gp = rates.gamma_plus;
  const double eta = couplings.eta, xi = couplings.xi;
  const double s2 = std::numbers::sqrt2;
  const double hbar_m = phys::hbar / mech.mass;

  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M(0, 0) = -gp;
  M(1, 1) = -gp;
  M(1, 2) = -s2 * omega0 * xi * A;
  M(2, 3) = 1.0;
  M(3, 2) = -mech.omega_m * mech.omega_m;
  M(3, 3) = -mech.kappa_m;
  M(3, 0) = -s2 * xi * omega0 * A * hbar_m;
  if (topology == Topology::srm) {
    M(0, 2) = s2 * (-g0 * eta * A / 2.0 + std::sqrt(g0) * eta * B / 2.0);
    M(3, 1) = -hbar_m * eta * std::sqrt(2.0 * g0) * B / 2.0;
  } else {
    M(0, 2) = -s2 * g0 * eta * A / 2.0;
  }
  return M;
}

Eigen::Matrix<double, 4, 5> LangevinModel::input() const {
  const auto [B, A] = amplitudes(*this);
  (void)B;
  const bool srm = topology == Topology::srm;
  const double gb = std::sqrt(srm ? rates.gamma0 : rates.gamma1);
  const double gc = std::sqrt(srm ? rates.gamma1 : rates.gamma0);
  const double hbar_m = phys::hbar / mech.mass;

  Eigen::Matrix<double, 4, 5> N = Eigen::Matrix<double, 4, 5>::Zero();
  N(0, b_amplitude) = gb;
  N(1, b_phase) = gb;
  N(0, c_amplitude) = gc;
  N(1, c_phase) = gc;
  N(3, thermal_force) = 1.0 / mech.mass;
  if (srm) {
    N(3, b_phase) = hbar_m * couplings.eta * std::sqrt(2.0 * rates.gamma0) * A / 2.0;
  } else {
    N(3, c_phase) = hbar_m * couplings.eta * std::sqrt(rates.gamma0) * A / std::numbers::sqrt2;
  }
  return N;
}

Eigen::Matrix<double, 2, 4> LangevinModel::readout() const {
  const bool srm = topology == Topology::srm;
  const double g = std::sqrt(srm ? rates.gamma1 : rates.gamma0);
  Eigen::Matrix<double, 2, 4> C = Eigen::Matrix<double, 2, 4>::Zero();
  C(0, 0) = g;
  C(1, 1) = g;
  if (!srm) {
    const auto [B, A] = amplitudes(*this);
    (void)B;
    C(0, 2) = g * couplings.eta * A / std::numbers::sqrt2;
  }
  return C;
}

Eigen::Matrix<double, 2, 5> LangevinModel::feedthrough() const {
  Eigen::Matrix<double, 2, 5> D = Eigen::Matrix<double, 2, 5>::Zero();
  D(0, c_amplitude) = -1.0;
  D(1, c_phase) = -1.0;
  return D;
}

LangevinResponse langevin_response(const LangevinModel& model, double omega) {
  const Eigen::Matrix4cd lhs =
      Complex(0.0, -omega) * Eigen::Matrix4cd::Identity() - model.drift().cast<Complex>();
  const Eigen::Matrix<Complex, 4, 5> s =
      lhs.partialPivLu().solve(model.input().cast<Complex>());
  const Eigen::Matrix<Complex, 2, 5> out =
      model.readout().cast<Complex>() * s + model.feedthrough().cast<Complex>();
  return LangevinResponse{s.row(2), out.row(0), out.row(1)};
}

}  // namespace msi
