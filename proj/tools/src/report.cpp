#include "conley_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "conley/complex.hpp"
#include "conley/errors.hpp"

namespace conley::cli {

namespace {

using nlohmann::json;

void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

std::string scalar(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_float: {
      const double d = v.get<double>();
      return std::isfinite(d) ? format_double(d) : "null";
    }
    case json::value_t::string: {
      std::string s;
      write_string(s, v.get<std::string>());
      return s;
    }
    default: return {};
  }
}

void write_json(std::string& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    // nlohmann::json objects are std::map backed, so iteration is sorted.
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      write_string(out, it.key());
      out += ": ";
      write_json(out, it.value(), indent + 2);
    }
    out += '\n' + close + '}';
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
    if (flat) {
      out += '[';
      for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + scalar(v[k]);
      out += ']';
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ",\n";
      out += pad;
      write_json(out, v[k], indent + 2);
    }
    out += '\n' + close + ']';
  } else {
    out += scalar(v);
  }
}

std::string plain_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + plain_scalar(v[k]);
    return s + "]";
  }
  return scalar(v);
}

bool flat_object(const json& v) {
  if (!v.is_object()) return false;
  return std::all_of(v.begin(), v.end(), [](const json& e) {
    return e.is_primitive() || (e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) {
                                  return x.is_primitive();
                                }));
  });
}

void write_table(std::ostringstream& out, const json& rows, const std::string& pad) {
  std::vector<std::string> columns;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) columns.push_back(it.key());
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(c.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      line.push_back(row.contains(columns[k]) ? plain_scalar(row[columns[k]]) : "");
      width[k] = std::max(width[k], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit_row = [&](const std::vector<std::string>& line) {
    out << pad;
    for (std::size_t k = 0; k < line.size(); ++k) {
      out << line[k] << std::string(width[k] - line[k].size() + (k + 1 < line.size() ? 2 : 0), ' ');
    }
    out << '\n';
  };
  emit_row(columns);
  for (const auto& line : cells) emit_row(line);
}

void write_plain(std::ostringstream& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = v.begin(); it != v.end(); ++it) {
    const json& e = it.value();
    const std::string label = v.is_object() ? it.key() : "-";
    if (e.is_primitive() || (e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) {
                               return x.is_primitive();
                             }))) {
      out << pad << label << ": " << plain_scalar(e) << '\n';
    } else if (e.is_array() && !e.empty() &&
               std::all_of(e.begin(), e.end(), [](const json& x) { return flat_object(x); })) {
      out << pad << label << ":\n";
      write_table(out, e, pad + "  ");
    } else {
      out << pad << label << ":\n";
      write_plain(out, e, indent + 2);
    }
  }
}

}  // namespace

std::string to_json_text(const nlohmann::json& value) {
  std::string out;
  write_json(out, value, 0);
  out += '\n';
  return out;
}

std::string to_plain_text(const nlohmann::json& value) {
  std::ostringstream out;
  write_plain(out, value, 0);
  return out.str();
}

void emit(const nlohmann::json& report, Format format, std::ostream& out) {
  out << (format == Format::Json ? to_json_text(report) : to_plain_text(report));
  out.flush();
  if (!out) throw IoError("failed to write report");
}

}  // namespace conley::cli
