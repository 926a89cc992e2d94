#include "metric_config.hpp"

#include <Eigen/Cholesky>
#include <fstream>
#include <numbers>
#include <sstream>

#include "finsler/catalog.hpp"

namespace finslerctl {

using finsler::Mat;
using finsler::ModelPtr;
using finsler::Vec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

double real_or(const Json& obj, const char* key, double def, const std::string& where) {
  return obj.contains(key) ? get_real(obj.at(key), where + "." + key) : def;
}

std::vector<finsler::FourierMode> read_modes(const Json& modes, int n, bool matrix, std::vector<Mat>* mats,
                                             std::vector<Vec>* vecs, const std::string& where) {
  if (!modes.is_array()) throw ConfigError(where + ": expected an array of modes");
  std::vector<finsler::FourierMode> out;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const std::string w = where + "[" + std::to_string(m) + "]";
    const Json& e = modes[m];
    if (!e.is_object()) throw ConfigError(w + ": expected an object");
    check_keys(e, {"wavevector", "phase", "amplitude"}, w);
    finsler::FourierMode mode{get_vec(require(e, "wavevector", w), n, w + ".wavevector"),
                              real_or(e, "phase", 0.0, w)};
    out.push_back(mode);
    if (matrix)
      mats->push_back(get_mat(require(e, "amplitude", w), n, w + ".amplitude"));
    else
      vecs->push_back(get_vec(require(e, "amplitude", w), n, w + ".amplitude"));
  }
  return out;
}

finsler::MatrixFieldPtr read_matrix_field(const Json& v, int n, const std::string& where) {
  if (v.is_array()) {
    Mat a = get_mat(v, n, where);
    if (Eigen::LLT<Mat>(a).info() != Eigen::Success) throw ConfigError(where + ": matrix is not positive definite");
    return std::make_shared<finsler::ConstantMatrixField>(a);
  }
  if (!v.is_object()) throw ConfigError(where + ": expected a matrix or a {base, modes} object");
  check_keys(v, {"base", "modes"}, where);
  Mat base = get_mat(require(v, "base", where), n, where + ".base");
  std::vector<Mat> amps;
  auto modes = v.contains("modes") ? read_modes(v.at("modes"), n, true, &amps, nullptr, where + ".modes")
                                   : std::vector<finsler::FourierMode>{};
  return std::make_shared<finsler::FourierMatrixField>(base, std::move(modes), std::move(amps));
}

finsler::VectorFieldPtr read_vector_field(const Json& v, int n, const std::string& where) {
  if (v.is_array()) return std::make_shared<finsler::ConstantVectorField>(get_vec(v, n, where));
  if (!v.is_object()) throw ConfigError(where + ": expected a vector or a {base, modes} object");
  check_keys(v, {"base", "modes"}, where);
  Vec base = get_vec(require(v, "base", where), n, where + ".base");
  std::vector<Vec> amps;
  auto modes = v.contains("modes") ? read_modes(v.at("modes"), n, false, nullptr, &amps, where + ".modes")
                                   : std::vector<finsler::FourierMode>{};
  return std::make_shared<finsler::FourierVectorField>(base, std::move(modes), std::move(amps));
}

std::vector<double> read_values(const Json& v, std::size_t count, const std::string& where) {
  if (!v.is_array() || v.size() != count)
    throw ConfigError(where + ": expected " + std::to_string(count) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(get_real(v[i], where));
  return out;
}

struct Box {
  Vec periods, lo, hi;
  bool compact = false;
};

// Periodicity and sampling box for the general kinds.
Box read_box(const Json& cfg, const Json& params, int n, const std::string& where, const Box* grid_default) {
  Box b;
  b.periods = cfg.contains("periodicity") ? get_vec(cfg.at("periodicity"), n, "periodicity") : Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    if (b.periods[i] < 0.0) throw ConfigError("periodicity: entries must be >= 0");
  b.lo = Vec::Zero(n);
  b.hi = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (grid_default) {
      b.lo[i] = grid_default->lo[i];
      b.hi[i] = grid_default->hi[i];
    } else if (b.periods[i] > 0.0) {
      b.hi[i] = b.periods[i];
    }
  }
  bool all_periodic = (b.periods.array() > 0.0).all();
  if (params.contains("lo")) b.lo = get_vec(params.at("lo"), n, where + ".lo");
  if (params.contains("hi")) b.hi = get_vec(params.at("hi"), n, where + ".hi");
  if (!grid_default && !all_periodic && !(params.contains("lo") && params.contains("hi")))
    throw ConfigError(where + ": 'lo' and 'hi' are required when an axis is not periodic");
  for (int i = 0; i < n; ++i)
    if (!(b.hi[i] > b.lo[i])) throw ConfigError(where + ": need lo < hi on every axis");
  b.compact = params.contains("compact") ? params.at("compact").get<bool>() : all_periodic;
  return b;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double get_real(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return finsler::kInf;
  }
  throw ConfigError(where + ": expected a number");
}

int get_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

Vec get_vec(const Json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ConfigError(where + ": expected an array of " + std::to_string(n) + " numbers");
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = get_real(v[static_cast<std::size_t>(i)], where);
  return out;
}

Mat get_mat(const Json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw ConfigError(where + ": expected " + std::to_string(n) + " rows");
  Mat out(n, n);
  for (int i = 0; i < n; ++i) out.row(i) = get_vec(v[static_cast<std::size_t>(i)], n, where).transpose();
  if (!out.isApprox(out.transpose(), 1e-14)) throw ConfigError(where + ": matrix must be symmetric");
  return out;
}

ModelPtr build_metric(const Json& cfg) {
  check_keys(cfg, {"kind", "dim", "params", "periodicity", "derivative_mode", "fd_step", "name"}, "metric");
  if (!cfg.contains("kind") || !cfg.at("kind").is_string()) throw ConfigError("metric: 'kind' must be a string");
  const std::string kind = cfg.at("kind").get<std::string>();
  const bool general = kind == "riemannian" || kind == "randers" || kind == "custom";
  const int n = cfg.contains("dim") ? get_int(cfg.at("dim"), "metric.dim") : 2;
  if (n < 1 || n > finsler::kMaxDim) throw ConfigError("metric.dim must lie in [1, 4]");
  const Json params = cfg.contains("params") ? cfg.at("params") : Json::object();
  const std::string pw = "metric.params";
  if (cfg.contains("periodicity") && !general)
    throw ConfigError("metric: 'periodicity' is fixed by kind '" + kind + "'");

  ModelPtr model;
  try {
    if (kind == "euclidean") {
      check_keys(params, {}, pw);
      model = finsler::catalog::euclidean(n);
    } else if (kind == "sphere") {
      check_keys(params, {"chart"}, pw);
      const std::string chart = params.value("chart", std::string("stereographic"));
      if (chart == "stereographic") {
        model = finsler::catalog::sphere_stereographic(n);
      } else if (chart == "polar") {
        if (n != 2) throw ConfigError("metric: the polar sphere chart is two-dimensional");
        model = finsler::catalog::sphere_polar();
      } else {
        throw ConfigError(pw + ".chart: expected 'stereographic' or 'polar'");
      }
    } else if (kind == "flat_torus") {
      check_keys(params, {}, pw);
      model = finsler::catalog::flat_torus(n);
    } else if (kind == "berwald_torus") {
      check_keys(params, {"n_param"}, pw);
      model = finsler::catalog::berwald_torus(get_int(require(params, "n_param", pw), pw + ".n_param"), n);
    } else if (kind == "randers_shear_torus") {
      check_keys(params, {"eps"}, pw);
      if (n != 2) throw ConfigError("metric: randers_shear_torus is two-dimensional");
      model = finsler::catalog::randers_shear_torus(real_or(params, "eps", 0.3, pw));
    } else if (kind == "randers_perturbed_torus") {
      check_keys(params, {"eps", "b1"}, pw);
      if (n != 2) throw ConfigError("metric: randers_perturbed_torus is two-dimensional");
      model = finsler::catalog::randers_perturbed_torus(real_or(params, "eps", 0.1, pw), real_or(params, "b1", 0.1, pw));
    } else if (kind == "riemannian" || kind == "randers") {
      if (kind == "riemannian")
        check_keys(params, {"a", "lo", "hi", "compact"}, pw);
      else
        check_keys(params, {"a", "b", "lo", "hi", "compact"}, pw);
      Box box = read_box(cfg, params, n, pw, nullptr);
      auto a = read_matrix_field(require(params, "a", pw), n, pw + ".a");
      if (kind == "riemannian")
        model = finsler::catalog::riemannian(a, box.periods, box.lo, box.hi, box.compact);
      else
        model = finsler::catalog::randers(a, read_vector_field(require(params, "b", pw), n, pw + ".b"), box.periods,
                                          box.lo, box.hi, box.compact);
    } else if (kind == "custom") {
      check_keys(params, {"grid", "a", "b", "lo", "hi", "compact", "interpolation_order"}, pw);
      if (params.contains("interpolation_order") && get_int(params.at("interpolation_order"), pw) != 3)
        throw ConfigError(pw + ".interpolation_order: only 3 (cubic) is supported");
      const Json& g = require(params, "grid", pw);
      check_keys(g, {"shape", "lo", "hi"}, pw + ".grid");
      finsler::GridSpec grid;
      const Json& shape = require(g, "shape", pw + ".grid");
      if (!shape.is_array() || static_cast<int>(shape.size()) != n) throw ConfigError(pw + ".grid.shape: need dim entries");
      for (int i = 0; i < n; ++i) {
        int m = get_int(shape[static_cast<std::size_t>(i)], pw + ".grid.shape");
        if (m < 4) throw ConfigError(pw + ".grid.shape: at least 4 nodes per axis");
        grid.shape.push_back(m);
      }
      grid.lo = get_vec(require(g, "lo", pw + ".grid"), n, pw + ".grid.lo");
      grid.hi = get_vec(require(g, "hi", pw + ".grid"), n, pw + ".grid.hi");
      Vec periods = cfg.contains("periodicity") ? get_vec(cfg.at("periodicity"), n, "periodicity") : Vec::Zero(n);
      for (int i = 0; i < n; ++i) {
        grid.periodic.push_back(periods[i] > 0.0);
        if (periods[i] > 0.0 && std::abs(grid.hi[i] - grid.lo[i] - periods[i]) > 1e-12)
          throw ConfigError(pw + ".grid: a periodic axis must span exactly one period");
      }
      Box def{periods, grid.lo, grid.hi, false};
      Box box = read_box(cfg, params, n, pw, &def);
      const std::size_t nodes = grid.size();
      auto a = std::make_shared<finsler::GridMatrixField>(
          grid, read_values(require(params, "a", pw), nodes * static_cast<std::size_t>(n * n), pw + ".a"));
      if (params.contains("b")) {
        auto b = std::make_shared<finsler::GridVectorField>(
            grid, read_values(params.at("b"), nodes * static_cast<std::size_t>(n), pw + ".b"));
        model = finsler::catalog::randers(a, b, box.periods, box.lo, box.hi, box.compact, "custom");
      } else {
        model = finsler::catalog::riemannian(a, box.periods, box.lo, box.hi, box.compact, "custom");
      }
    } else {
      throw ConfigError("metric: unknown kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("metric: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const finsler::InvalidArgument& e) {
    throw ConfigError(std::string("metric: ") + e.what());
  }

  auto mut = std::const_pointer_cast<finsler::MetricModel>(model);
  if (cfg.contains("derivative_mode") || cfg.contains("fd_step")) {
    const std::string mode = cfg.value("derivative_mode", std::string("analytic"));
    const double step = real_or(cfg, "fd_step", 1e-5, "metric");
    if (!(step > 0.0)) throw ConfigError("metric.fd_step must be positive");
    if (mode == "analytic")
      mut->set_derivative_mode(finsler::DerivativeMode::analytic, step);
    else if (mode == "finite_difference")
      mut->set_derivative_mode(finsler::DerivativeMode::finite_difference, step);
    else
      throw ConfigError("metric.derivative_mode: expected 'analytic' or 'finite_difference'");
  }
  if (cfg.contains("name")) {
    if (!cfg.at("name").is_string()) throw ConfigError("metric.name must be a string");
    mut->set_name(cfg.at("name").get<std::string>());
  }
  return model;
}

ModelPtr load_metric(const Json& spec, Json* resolved) {
  Json cfg = spec.is_string() ? read_json_file(spec.get<std::string>()) : spec;
  if (!cfg.is_object()) throw ConfigError("metric: expected an object or a path");
  ModelPtr m = build_metric(cfg);
  if (resolved) *resolved = cfg;
  return m;
}

}  // namespace finslerctl
