#include "msi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

#include "msi/errors.hpp"

namespace msi {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_number(std::string_view v, int line) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
  }
  return x;
}

template <class Int>
Int to_integer(std::string_view v, int line) {
  Int x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

template <class E>
struct Names {
  std::vector<std::pair<std::string_view, E>> table;

  E parse(std::string_view v, int line) const {
    for (const auto& [name, value] : table) {
      if (name == v) return value;
    }
    std::string options;
    for (const auto& entry : table) options += (options.empty() ? "" : "|") + std::string(entry.first);
    throw ParseError(line, "expected one of " + options + ", got '" + std::string(v) + "'");
  }
  std::string name(E value) const {
    for (const auto& [n, e] : table) {
      if (e == value) return std::string(n);
    }
    return {};
  }
};

const Names<Topology> kTopology{{{"srm", Topology::srm}, {"prm", Topology::prm}}};
const Names<EpsilonMode> kEpsilonMode{
    {{"fixed", EpsilonMode::fixed}, {"opt", EpsilonMode::opt}, {"max", EpsilonMode::max}}};
const Names<GridScale> kScale{{{"log", GridScale::log}, {"linear", GridScale::linear}}};
const Names<SqueezeTarget> kSqueezeTarget{
    {{"backaction", SqueezeTarget::backaction}, {"angle", SqueezeTarget::angle}}};
const Names<OccupancyModel> kOccupancy{
    {{"high_temperature", OccupancyModel::high_temperature}, {"bose", OccupancyModel::bose}}};
const Names<ImpedanceModel> kImpedance{
    {{"full", ImpedanceModel::full}, {"resonant", ImpedanceModel::resonant}}};
const Names<HomodyneMode> kHomodyne{{{"auto", HomodyneMode::auto_select},
                                     {"chi", HomodyneMode::chi},
                                     {"beta+90", HomodyneMode::beta_plus_90},
                                     {"phase", HomodyneMode::phase},
                                     {"amplitude", HomodyneMode::amplitude}}};

struct Field {
  std::string_view key;
  std::function<void(ModelConfig&, std::string_view, int)> set;
  std::function<std::string(const ModelConfig&)> get;
};

Field number(std::string_view key, double ModelConfig::*member) {
  return {key, [member](ModelConfig& c, std::string_view v, int line) { c.*member = to_number(v, line); },
          [member](const ModelConfig& c) { return format_double(c.*member); }};
}

template <class Int>
Field integer(std::string_view key, Int ModelConfig::*member) {
  return {key,
          [member](ModelConfig& c, std::string_view v, int line) {
            c.*member = to_integer<Int>(v, line);
          },
          [member](const ModelConfig& c) { return std::to_string(c.*member); }};
}

template <class E>
Field choice(std::string_view key, E ModelConfig::*member, const Names<E>& names) {
  return {key,
          [member, &names](ModelConfig& c, std::string_view v, int line) {
            c.*member = names.parse(v, line);
          },
          [member, &names](const ModelConfig& c) { return names.name(c.*member); }};
}

Field homodyne_field() {
  return {"homodyne_angle",
          [](ModelConfig& c, std::string_view v, int line) {
            const bool named = std::any_of(kHomodyne.table.begin(), kHomodyne.table.end(),
                                           [&](const auto& e) { return e.first == v; });
            if (named) {
              c.homodyne_angle = HomodyneChoice{kHomodyne.parse(v, line), 0.0};
            } else {
              c.homodyne_angle = HomodyneChoice{HomodyneMode::radians, to_number(v, line)};
            }
          },
          [](const ModelConfig& c) {
            return c.homodyne_angle.mode == HomodyneMode::radians
                       ? format_double(c.homodyne_angle.radians)
                       : kHomodyne.name(c.homodyne_angle.mode);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      choice("topology", &ModelConfig::topology, kTopology),
      number("mirror_reflectivity", &ModelConfig::mirror_reflectivity),
      number("baseline_reflectivity", &ModelConfig::baseline_reflectivity),
      number("epsilon", &ModelConfig::epsilon),
      choice("epsilon_mode", &ModelConfig::epsilon_mode, kEpsilonMode),
      number("epsilon_step", &ModelConfig::epsilon_step),
      number("wavelength_nm", &ModelConfig::wavelength_nm),
      number("cavity_length_cm", &ModelConfig::cavity_length_cm),
      number("gamma1_over_2pi_Hz", &ModelConfig::gamma1_over_2pi_Hz),
      number("gamma0_over_2pi_Hz", &ModelConfig::gamma0_over_2pi_Hz),
      number("input_power_W", &ModelConfig::input_power_W),
      number("sweep_gamma0_min_Hz", &ModelConfig::sweep_gamma0_min_Hz),
      number("sweep_gamma0_max_Hz", &ModelConfig::sweep_gamma0_max_Hz),
      integer("sweep_points", &ModelConfig::sweep_points),
      choice("sweep_scale", &ModelConfig::sweep_scale, kScale),
      number("mass_ng", &ModelConfig::mass_ng),
      number("freq_mech_kHz", &ModelConfig::freq_mech_kHz),
      number("Q", &ModelConfig::Q),
      number("temperature_K", &ModelConfig::temperature_K),
      number("squeeze_dB", &ModelConfig::squeeze_dB),
      choice("squeeze_target", &ModelConfig::squeeze_target, kSqueezeTarget),
      number("squeeze_angle_rad", &ModelConfig::squeeze_angle_rad),
      homodyne_field(),
      number("laser_excess_amplitude", &ModelConfig::laser_excess_amplitude),
      number("laser_excess_phase", &ModelConfig::laser_excess_phase),
      choice("occupancy_mode", &ModelConfig::occupancy_mode, kOccupancy),
      choice("impedance", &ModelConfig::impedance, kImpedance),
      number("spectrum_min_Hz", &ModelConfig::spectrum_min_Hz),
      number("spectrum_max_Hz", &ModelConfig::spectrum_max_Hz),
      integer("spectrum_points", &ModelConfig::spectrum_points),
      integer("spectrum_resonance_points", &ModelConfig::spectrum_resonance_points),
      integer("verify_samples", &ModelConfig::verify_samples),
      integer("verify_seed", &ModelConfig::verify_seed),
  };
  return table;
}

void assign(ModelConfig& c, std::string_view key, std::string_view value, int line) {
  for (const Field& f : fields()) {
    if (f.key == key) {
      f.set(c, value, line);
      return;
    }
  }
  throw ParseError(line, "unknown key '" + std::string(key) + "'");
}

void split_assignment(std::string_view text, int line, std::string_view& key,
                      std::string_view& value) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
  key = trim(text.substr(0, eq));
  value = trim(text.substr(eq + 1));
  if (key.empty()) throw ParseError(line, "missing key");
  if (value.empty()) throw ParseError(line, "missing value for '" + std::string(key) + "'");
}

void require(bool ok, const char* what) {
  if (!ok) throw UnitError(what);
}

}  // namespace

void validate(const ModelConfig& c) {
  require(c.mirror_reflectivity > 0.0 && c.mirror_reflectivity <= 1.0,
          "mirror_reflectivity must lie in (0, 1]");
  require(c.baseline_reflectivity > 0.0 && c.baseline_reflectivity <= 1.0,
          "baseline_reflectivity must lie in (0, 1]");
  require(c.epsilon > -1.0 && c.epsilon < 1.0, "epsilon must lie in (-1, 1)");
  require(c.epsilon_step > 0.0, "epsilon_step must be positive");
  require(c.wavelength_nm > 0.0, "wavelength_nm must be positive");
  require(c.cavity_length_cm > 0.0, "cavity_length_cm must be positive");
  require(c.gamma1_over_2pi_Hz > 0.0, "gamma1_over_2pi_Hz must be positive");
  require(c.gamma0_over_2pi_Hz > 0.0, "gamma0_over_2pi_Hz must be positive");
  require(c.input_power_W > 0.0, "input_power_W must be positive");
  require(c.sweep_gamma0_min_Hz > 0.0, "sweep_gamma0_min_Hz must be positive");
  require(c.sweep_gamma0_max_Hz > c.sweep_gamma0_min_Hz,
          "sweep_gamma0_max_Hz must exceed sweep_gamma0_min_Hz");
  require(c.sweep_points >= 2, "sweep_points must be at least 2");
  require(c.mass_ng > 0.0, "mass_ng must be positive");
  require(c.freq_mech_kHz > 0.0, "freq_mech_kHz must be positive");
  require(c.Q > 0.0, "Q must be positive");
  require(c.temperature_K > 0.0, "temperature_K must be positive");
  require(c.laser_excess_amplitude > 0.0, "laser_excess_amplitude must be positive");
  require(c.laser_excess_phase > 0.0, "laser_excess_phase must be positive");
  require(c.spectrum_min_Hz > 0.0, "spectrum_min_Hz must be positive");
  require(c.spectrum_max_Hz > c.spectrum_min_Hz, "spectrum_max_Hz must exceed spectrum_min_Hz");
  require(c.spectrum_points >= 2, "spectrum_points must be at least 2");
  require(c.spectrum_resonance_points >= 0, "spectrum_resonance_points must not be negative");
  require(c.verify_samples >= 1, "verify_samples must be at least 1");
}

ModelConfig parse_config(const std::string& text) {
  ModelConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::string_view key, value;
    split_assignment(s, line, key, value);
    assign(c, key, value, line);
  }
  validate(c);
  return c;
}

void apply_override(ModelConfig& c, const std::string& assignment) {
  std::string_view key, value;
  split_assignment(assignment, 0, key, value);
  assign(c, key, value, 0);
  validate(c);
}

std::string echo_config(const ModelConfig& c) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(c);
    out += '\n';
  }
  return out;
}

Scenario to_scenario(const ModelConfig& c) {
  validate(c);
  Scenario s;
  s.topology = c.topology;
  s.reflectivity = c.mirror_reflectivity;
  s.epsilon_mode = c.epsilon_mode;
  s.epsilon = c.epsilon;
  s.wavelength = c.wavelength_nm * 1e-9;
  s.cavity_length = c.cavity_length_cm * 1e-2;
  s.gamma0 = two_pi * c.gamma0_over_2pi_Hz;
  s.gamma1 = two_pi * c.gamma1_over_2pi_Hz;
  s.power = c.input_power_W;
  s.mass = c.mass_ng * 1e-12;
  s.omega_m = two_pi * c.freq_mech_kHz * 1e3;
  s.quality = c.Q;
  s.temperature = c.temperature_K;
  s.squeeze_db = c.squeeze_dB;
  s.squeeze_target = c.squeeze_target;
  s.squeeze_angle = c.squeeze_angle_rad;
  s.laser_excess_amplitude = c.laser_excess_amplitude;
  s.laser_excess_phase = c.laser_excess_phase;
  s.occupancy = c.occupancy_mode;
  s.impedance = c.impedance;
  return s;
}

SweepSpec gamma0_sweep(const ModelConfig& c) {
  SweepSpec s;
  s.parameter = "gamma0";
  s.lo = two_pi * c.sweep_gamma0_min_Hz;
  s.hi = two_pi * c.sweep_gamma0_max_Hz;
  s.points = c.sweep_points;
  s.scale = c.sweep_scale;
  return s;
}

Eigen::ArrayXd spectrum_grid(const ModelConfig& c, double omega_M, double kappa_M) {
  SweepSpec base{"Omega", two_pi * c.spectrum_min_Hz, two_pi * c.spectrum_max_Hz,
                 c.spectrum_points, GridScale::log};
  const Eigen::ArrayXd coarse = base.grid();
  std::vector<double> all(coarse.begin(), coarse.end());
  if (c.spectrum_resonance_points >= 2) {
    const Eigen::ArrayXd fine = Eigen::ArrayXd::LinSpaced(
        c.spectrum_resonance_points, omega_M - 20.0 * kappa_M, omega_M + 20.0 * kappa_M);
    for (double w : fine) {
      if (w > 0.0) all.push_back(w);
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return Eigen::Map<const Eigen::ArrayXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

double homodyne_angle(const ModelConfig& c, const NormalizedCouplings& nc, double automatic) {
  switch (c.homodyne_angle.mode) {
    case HomodyneMode::radians:
      return c.homodyne_angle.radians;
    case HomodyneMode::chi:
      return correlation_angle(Topology::srm, nc);
    case HomodyneMode::beta_plus_90:
      return correlation_angle(Topology::prm, nc) + 0.5 * std::numbers::pi;
    case HomodyneMode::phase:
      return 0.5 * std::numbers::pi;
    case HomodyneMode::amplitude:
      return 0.0;
    case HomodyneMode::auto_select:
      break;
  }
  return automatic;
}

}  // namespace msi
