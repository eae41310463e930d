#pragma once
// Deterministic text output: CSV tables and JSON documents.  All floating
// point numbers are rendered with "%.17g" (17 significant digits round-trip
// a double exactly), so repeated runs produce byte-identical files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace scarlab {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

// CSV with a fixed header line; numeric cells at full precision.
inline std::string csv_table(const std::string& header,
                             const std::vector<std::vector<double>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

// JSON serializer mirroring the nlohmann layout but forcing "%.17g" floats
// (the stock dump() prints shortest-round-trip forms instead).
inline void dump_json_to(const nlohmann::ordered_json& j, std::string& out,
                         int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) *
                            static_cast<std::size_t>(depth + 1),
                        ' ');
  const std::string close_pad(
      static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        out += nlohmann::ordered_json(it.key()).dump();
        out += ": ";
        dump_json_to(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        dump_json_to(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out += format_double(v);
      } else {
        out += "null";
      }
      return;
    }
    default:
      out += j.dump();  // strings, integers, booleans, null
      return;
  }
}

inline std::string dump_json(const nlohmann::ordered_json& j, int indent = 2) {
  std::string out;
  dump_json_to(j, out, indent, 0);
  out += '\n';
  return out;
}

}  // namespace scarlab
