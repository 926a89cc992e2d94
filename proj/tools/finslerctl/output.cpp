#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace finslerctl {

Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

Json num_array(const finsler::Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

Json num_matrix(const finsler::Mat& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(num_array(m.row(i).transpose()));
  return a;
}

Json named_values(const std::vector<std::pair<std::string, double>>& values) {
  Json o = Json::object();
  for (const auto& [k, v] : values) o[k] = num(v);
  return o;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // keep reals recognizable as reals after a round trip (1.0, -0.0)
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string scalar_text(const Json& v) {
  switch (v.type()) {
    case Json::value_t::number_float:
      return format_real(v.get<double>());
    case Json::value_t::null:
      return "null";
    default:
      return v.dump();
  }
}

void write(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      out << pad << Json(it.key()).dump() << ": ";
      write(out, it.value(), depth + 1);
    }
    out << "\n" << close << "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out << "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : v) flat = flat && !e.is_structured();
    if (flat) {
      out << "[";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ",\n";
      out << pad;
      write(out, v[i], depth + 1);
    }
    out << "\n" << close << "]";
  } else {
    out << scalar_text(v);
  }
}

void flatten_into(const Json& v, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  auto join = [&](const std::string& k) { return path.empty() ? k : path + "." + k; };
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten_into(it.value(), join(it.key()), out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten_into(v[i], join(std::to_string(i)), out);
  } else if (v.is_string()) {
    out.emplace_back(path, v.get<std::string>());
  } else {
    out.emplace_back(path, scalar_text(v));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string to_json_text(const Json& doc) {
  std::ostringstream out;
  write(out, doc, 0);
  out << "\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> flatten(const Json& doc) {
  std::vector<std::pair<std::string, std::string>> out;
  flatten_into(doc, "", out);
  return out;
}

std::string to_csv_text(const Json& doc) {
  std::string s = "key,value\n";
  for (const auto& [k, v] : flatten(doc)) s += csv_field(k) + "," + csv_field(v) + "\n";
  return s;
}

}  // namespace finslerctl
