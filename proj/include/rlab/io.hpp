#pragma once

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/errors.hpp"
#include "rlab/generator.hpp"
#include "rlab/ode.hpp"

namespace rlab {

namespace io_detail {

using json = nlohmann::json;

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline cplx complex_pair(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline SchwarzFunction parse_omega(const json& j, const std::string& path) {
  if (j.is_null()) return SchwarzFunction::zero();
  if (!j.is_object()) throw ConfigError(path, "expected an object or null");
  const double angle = j.contains("rotation_angle") ? number(j["rotation_angle"], path + ".rotation_angle") : 0.0;
  int power = 1;
  if (j.contains("power")) {
    if (!j["power"].is_number_integer()) throw ConfigError(path + ".power", "expected an integer");
    power = j["power"].get<int>();
  }
  std::vector<cplx> zeros;
  if (j.contains("zeros")) {
    const json& zs = j["zeros"];
    if (!zs.is_array()) throw ConfigError(path + ".zeros", "expected an array");
    for (std::size_t i = 0; i < zs.size(); ++i)
      zeros.push_back(complex_pair(zs[i], path + ".zeros[" + std::to_string(i) + "]"));
  }
  try {
    return SchwarzFunction(angle, power, std::move(zeros));
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
}

inline HerglotzData parse_herglotz(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  try {
    if (j.contains("atoms")) {
      const json& atoms = j["atoms"];
      if (!atoms.is_array()) throw ConfigError(path + ".atoms", "expected an array");
      std::vector<Atom> out;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string p = path + ".atoms[" + std::to_string(i) + "]";
        const double mass = number(field(atoms[i], "mass", p), p + ".mass");
        if (!(mass >= 0.0)) throw ConfigError(p + ".mass", "must be nonnegative");
        out.push_back({number(field(atoms[i], "angle", p), p + ".angle"), mass});
      }
      const double gamma = j.contains("gamma") ? number(j["gamma"], path + ".gamma") : 0.0;
      return HerglotzData::atomic(std::move(out), gamma);
    }
    if (j.contains("q")) {
      const cplx q = complex_pair(j["q"], path + ".q");
      if (!(q.real() > 0.0)) throw ConfigError(path + ".q", "Re q must be positive");
      const SchwarzFunction omega = j.contains("omega") ? parse_omega(j["omega"], path + ".omega")
                                                        : SchwarzFunction::zero();
      return HerglotzData::schwarz(q, omega);
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected 'atoms' or 'q'");
}

}  // namespace io_detail

/// Generator document:
///   {"tau": [re, im], "herglotz": {"atoms": [{"angle", "mass"}...], "gamma"}}
///   {"tau": [re, im], "herglotz": {"q": [re, im], "omega": {...} | null}}
/// "q"/"omega" may also sit at top level; tau defaults to 0.
inline GeneratorSpec generator_from_json(const nlohmann::json& j, const std::string& path = "") {
  using namespace io_detail;
  if (!j.is_object()) throw ConfigError(path, "generator must be an object");
  const std::string prefix = path.empty() ? "" : path + ".";
  const cplx tau = j.contains("tau") ? complex_pair(j["tau"], prefix + "tau") : cplx(0.0);
  if (!(std::abs(tau) <= 1.0)) throw ConfigError(prefix + "tau", "|tau| must be <= 1");
  if (j.contains("herglotz")) return {tau, parse_herglotz(j["herglotz"], prefix + "herglotz")};
  if (j.contains("q")) return {tau, parse_herglotz(j, path)};
  throw ConfigError(path, "expected 'herglotz' or 'q'");
}

inline nlohmann::ordered_json generator_to_json(const GeneratorSpec& g) {
  nlohmann::ordered_json j;
  j["tau"] = {g.tau().real(), g.tau().imag()};
  const HerglotzData& h = g.herglotz();
  nlohmann::ordered_json hj;
  if (h.is_atomic()) {
    hj["atoms"] = nlohmann::ordered_json::array();
    for (const Atom& a : h.atomic_data().atoms) hj["atoms"].push_back({{"angle", a.angle}, {"mass", a.mass}});
    hj["gamma"] = h.atomic_data().gamma;
  } else {
    const auto& s = h.schwarz_data();
    hj["q"] = {s.q.real(), s.q.imag()};
    if (s.omega.is_zero()) {
      hj["omega"] = nullptr;
    } else {
      nlohmann::ordered_json om;
      om["rotation_angle"] = s.omega.rotation_angle();
      om["power"] = s.omega.power();
      om["zeros"] = nlohmann::ordered_json::array();
      for (const cplx& a : s.omega.zeros()) om["zeros"].push_back({a.real(), a.imag()});
      hj["omega"] = om;
    }
  }
  j["herglotz"] = hj;
  return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

/// Parses "0.3+0.1i", "-2.5i", "1", "1-i", "(0.3,0.1)".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  const auto fail = [&] { return ConfigError("", "cannot parse complex number '" + text + "'"); };
  if (s.empty()) throw fail();
  if (s.front() == '(' && s.back() == ')') {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw fail();
    try {
      return {std::stod(s.substr(1, comma - 1)), std::stod(s.substr(comma + 1, s.size() - comma - 2))};
    } catch (...) {
      throw fail();
    }
  }
  const auto to_double = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (...) {
      throw fail();
    }
    if (used != part.size()) throw fail();
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {to_double(s), 0.0};
  s.pop_back();
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

/// Trajectory CSV: s, phase, re(u), im(u), local_error.
inline std::string trajectory_csv(const std::vector<FlowPoint>& traj) {
  std::ostringstream out;
  out << "s,phase,re_u,im_u,local_error\n";
  char buf[160];
  for (const FlowPoint& p : traj) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.s, p.phase, p.u.real(), p.u.imag(),
                  p.local_error);
    out << buf;
  }
  return out.str();
}

}  // namespace rlab
