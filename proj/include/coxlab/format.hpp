#pragma once
// Serialization helpers. Every real is written with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace coxlab {

inline std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump17(const nlohmann::json& j, std::string& out, int indent, int depth) {
  const auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no infinities; they are written as strings
      out += std::isfinite(x) ? fmt17(x) : "\"" + fmt17(x) + "\"";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump17(it.value(), out, indent, depth + 1);
      }
      nl(depth);
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += ',';
          if (flat && indent >= 0) out += ' ';
        }
        first = false;
        if (!flat) nl(depth + 1);
        dump17(e, out, indent, depth + 1);
      }
      if (!flat) nl(depth);
      out += ']';
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// nlohmann::json::dump with reals at 17 significant digits.
inline std::string dump17(const nlohmann::json& j, int indent = 2) {
  std::string out;
  detail::dump17(j, out, indent, 0);
  return out;
}

/// Parses a real written by dump17 (numbers, or "inf"/"-inf" strings).
inline double read_real(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace coxlab
