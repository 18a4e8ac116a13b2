#pragma once

#include <complex>
#include <numbers>

namespace msi {

using Complex = std::complex<double>;

namespace phys {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
inline constexpr double c = 299792458.0;         // m/s
}  // namespace phys

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace msi
