#include "srz/config_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace srz {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

using Setter = std::function<bool(SimConfig&, const std::string&)>;

bool set_double(double& field, const std::string& value) {
  try {
    std::size_t pos = 0;
    field = std::stod(value, &pos);
    return pos == value.size();
  } catch (...) {
    return false;
  }
}

std::map<std::string, Setter> make_setters() {
  std::map<std::string, Setter> m;
  auto d = [](double SimConfig::* ptr) {
    return [ptr](SimConfig& c, const std::string& v) { return set_double(c.*ptr, v); };
  };
  auto nested = [](auto member, auto field) {
    return [member, field](SimConfig& c, const std::string& v) {
      return set_double((c.*member).*field, v);
    };
  };

  m["geometry.corridor_length"] = nested(&SimConfig::geometry, &ZoneGeometry::corridor_length);
  m["geometry.upstream_length"] = nested(&SimConfig::geometry, &ZoneGeometry::upstream_length);
  m["geometry.control_zone_length"] = nested(&SimConfig::geometry, &ZoneGeometry::control_zone_length);
  m["geometry.srz_length"] = nested(&SimConfig::geometry, &ZoneGeometry::srz_length);
  m["geometry.v_srz"] = nested(&SimConfig::geometry, &ZoneGeometry::v_srz);

  m["control.u_min"] = nested(&SimConfig::control, &ControlParams::u_min);
  m["control.u_max"] = nested(&SimConfig::control, &ControlParams::u_max);
  m["control.v_min"] = nested(&SimConfig::control, &ControlParams::v_min);
  m["control.v_max"] = nested(&SimConfig::control, &ControlParams::v_max);

  m["safety.c0"] = nested(&SimConfig::safety, &SafetyParams::c0);
  m["safety.c1"] = nested(&SimConfig::safety, &SafetyParams::c1);

  for (int k = 0; k < 4; ++k) {
    m["fuel.w" + std::to_string(k)] = [k](SimConfig& c, const std::string& v) {
      return set_double(c.fuel.w[k], v);
    };
  }
  for (int k = 0; k < 3; ++k) {
    m["fuel.n" + std::to_string(k)] = [k](SimConfig& c, const std::string& v) {
      return set_double(c.fuel.n[k], v);
    };
  }

  m["car_following.desired_speed"] = nested(&SimConfig::car_following, &CarFollowingParams::desired_speed);
  m["car_following.time_headway"] = nested(&SimConfig::car_following, &CarFollowingParams::time_headway);
  m["car_following.min_spacing"] = nested(&SimConfig::car_following, &CarFollowingParams::min_spacing);
  m["car_following.max_accel"] = nested(&SimConfig::car_following, &CarFollowingParams::max_accel);
  m["car_following.comfortable_decel"] = nested(&SimConfig::car_following, &CarFollowingParams::comfortable_decel);
  m["car_following.accel_exponent"] = nested(&SimConfig::car_following, &CarFollowingParams::accel_exponent);
  m["car_following.srz_time_headway"] = nested(&SimConfig::car_following, &CarFollowingParams::srz_time_headway);

  m["spdharm.s_m"] = nested(&SimConfig::spdharm, &SpdHarmParams::s_m);
  m["spdharm.s_n"] = nested(&SimConfig::spdharm, &SpdHarmParams::s_n);
  m["spdharm.dx_mn"] = nested(&SimConfig::spdharm, &SpdHarmParams::dx_mn);
  m["spdharm.measurement_window"] = nested(&SimConfig::spdharm, &SpdHarmParams::measurement_window);

  m["volume"] = d(&SimConfig::volume);
  m["duration"] = d(&SimConfig::duration);
  m["dt"] = d(&SimConfig::dt);
  m["entry_speed_mean"] = d(&SimConfig::entry_speed_mean);
  m["entry_speed_stddev"] = d(&SimConfig::entry_speed_stddev);

  m["seed"] = [](SimConfig& c, const std::string& v) {
    try {
      std::size_t pos = 0;
      c.seed = std::stoull(v, &pos);
      return pos == v.size();
    } catch (...) {
      return false;
    }
  };
  m["replications"] = [](SimConfig& c, const std::string& v) {
    try {
      std::size_t pos = 0;
      c.replications = std::stoi(v, &pos);
      return pos == v.size();
    } catch (...) {
      return false;
    }
  };
  m["controller"] = [](SimConfig& c, const std::string& v) {
    const auto kind = controller_from_string(v);
    if (!kind.has_value()) return false;
    c.controller = *kind;
    return true;
  };
  return m;
}

}  // namespace

ConfigLoadResult parse_config(const std::string& text) {
  static const std::map<std::string, Setter> setters = make_setters();
  ConfigLoadResult out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      out.validation.violations.push_back("line " + std::to_string(lineno) +
                                          ": expected key = value");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      out.validation.violations.push_back(key + ": unknown key");
      continue;
    }
    if (!it->second(out.config, value)) {
      out.validation.violations.push_back(key + ": cannot parse value '" + value + "'");
    }
  }
  if (out.validation.ok()) {
    out.validation = validate_config(out.config);
  }
  return out;
}

ConfigLoadResult load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigLoadResult out;
    out.validation.violations.push_back(path + ": cannot open config file");
    return out;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "geometry.corridor_length = " << c.geometry.corridor_length << '\n'
     << "geometry.upstream_length = " << c.geometry.upstream_length << '\n'
     << "geometry.control_zone_length = " << c.geometry.control_zone_length << '\n'
     << "geometry.srz_length = " << c.geometry.srz_length << '\n'
     << "geometry.v_srz = " << c.geometry.v_srz << '\n'
     << "control.u_min = " << c.control.u_min << '\n'
     << "control.u_max = " << c.control.u_max << '\n'
     << "control.v_min = " << c.control.v_min << '\n'
     << "control.v_max = " << c.control.v_max << '\n'
     << "safety.c0 = " << c.safety.c0 << '\n'
     << "safety.c1 = " << c.safety.c1 << '\n';
  for (int k = 0; k < 4; ++k) os << "fuel.w" << k << " = " << c.fuel.w[k] << '\n';
  for (int k = 0; k < 3; ++k) os << "fuel.n" << k << " = " << c.fuel.n[k] << '\n';
  os << "car_following.desired_speed = " << c.car_following.desired_speed << '\n'
     << "car_following.time_headway = " << c.car_following.time_headway << '\n'
     << "car_following.min_spacing = " << c.car_following.min_spacing << '\n'
     << "car_following.max_accel = " << c.car_following.max_accel << '\n'
     << "car_following.comfortable_decel = " << c.car_following.comfortable_decel << '\n'
     << "car_following.accel_exponent = " << c.car_following.accel_exponent << '\n'
     << "car_following.srz_time_headway = " << c.car_following.srz_time_headway << '\n'
     << "spdharm.s_m = " << c.spdharm.s_m << '\n'
     << "spdharm.s_n = " << c.spdharm.s_n << '\n'
     << "spdharm.dx_mn = " << c.spdharm.dx_mn << '\n'
     << "spdharm.measurement_window = " << c.spdharm.measurement_window << '\n'
     << "volume = " << c.volume << '\n'
     << "duration = " << c.duration << '\n'
     << "dt = " << c.dt << '\n'
     << "seed = " << c.seed << '\n'
     << "replications = " << c.replications << '\n'
     << "controller = " << to_string(c.controller) << '\n'
     << "entry_speed_mean = " << c.entry_speed_mean << '\n'
     << "entry_speed_stddev = " << c.entry_speed_stddev << '\n';
  return os.str();
}

}  // namespace srz
