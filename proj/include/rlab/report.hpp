#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

#include "rlab/grid.hpp"

namespace rlab {

using ordered_json = nlohmann::ordered_json;

/// Outcome of one numbered check: pass flag, worst signed margin (negative
/// means violated) and the sample point that produced it.
struct CheckReport {
  std::string check;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  cplx witness{0.0, 0.0};
  ordered_json params = ordered_json::object();

  ordered_json to_json() const {
    ordered_json j;
    j["check"] = check;
    j["pass"] = pass;
    j["worst_margin"] = worst_margin;
    j["witness"] = {witness.real(), witness.imag()};
    j["params"] = params;
    return j;
  }
};

/// Running minimum of a signed margin. Ties keep the earliest index, so a
/// sweep in grid order gives a deterministic witness.
class MarginTracker {
 public:
  void update(double margin, cplx at) {
    // NaN must count as a violation, never be skipped.
    if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
    if (!seen_ || margin < worst_) {
      worst_ = margin;
      witness_ = at;
      seen_ = true;
    }
  }

  void merge(const MarginTracker& other) {
    if (other.seen_) update(other.worst_, other.witness_);
  }

  bool seen() const { return seen_; }
  double worst() const { return seen_ ? worst_ : std::numeric_limits<double>::infinity(); }
  cplx witness() const { return witness_; }

 private:
  bool seen_ = false;
  double worst_ = std::numeric_limits<double>::infinity();
  cplx witness_{0.0, 0.0};
};

namespace detail {

inline void dump_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void dump_value(std::string& out, const ordered_json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += ordered_json(key).dump();
        out += ": ";
        dump_value(out, val, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool nested = false;
      for (const auto& e : j) nested = nested || e.is_structured();
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += nested ? "," : ", ";
        if (nested) newline(depth + 1);
        dump_value(out, j[i], indent, depth + 1);
      }
      if (nested) newline(depth);
      out += ']';
      return;
    }
    case ordered_json::value_t::number_float:
      dump_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serializes with insertion-ordered keys and every float printed with 17
/// significant digits, so identical inputs give byte-identical files.
inline std::string dump_deterministic(const ordered_json& j, int indent = 2) {
  std::string out;
  detail::dump_value(out, j, indent, 0);
  out += '\n';
  return out;
}

}  // namespace rlab
