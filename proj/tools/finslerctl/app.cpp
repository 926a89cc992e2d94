#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "finsler/bounds.hpp"
#include "finsler/centermass.hpp"
#include "finsler/invariants.hpp"
#include "finsler/tensors.hpp"
#include "finsler/verify.hpp"
#include "metric_config.hpp"
#include "output.hpp"

namespace finslerctl {

namespace {

using finsler::Vec;

// ---------------------------------------------------------------------------
// Parameters: each one can come from a flag or from the --config file; the
// flag wins. Resolved values are embedded in the report.

enum class Kind { real, integer, text, json };

struct Param {
  std::string key;
  Kind kind;
  Json def;  // null: optional with no default
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
};

Json parse_value(const Param& p, const std::string& raw) {
  const std::string where = "--" + p.key;
  try {
    std::size_t used = 0;
    switch (p.kind) {
      case Kind::real: {
        double v = std::stod(raw, &used);
        if (used != raw.size()) break;
        return num(v);
      }
      case Kind::integer: {
        long long v = std::stoll(raw, &used);
        if (used != raw.size()) break;
        return v;
      }
      case Kind::text:
        return raw;
      case Kind::json:
        // inline JSON objects/arrays, anything else is a path or plain text
        if (!raw.empty() && (raw.front() == '{' || raw.front() == '[')) return Json::parse(raw);
        return raw;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(where + ": cannot parse '" + raw + "'");
}

Json check_value(const Param& p, const Json& v) {
  const std::string where = "config." + p.key;
  switch (p.kind) {
    case Kind::real:
      return num(get_real(v, where));
    case Kind::integer:
      if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
      return v;
    case Kind::text:
      if (!v.is_string()) throw ConfigError(where + ": expected a string");
      return v;
    case Kind::json:
      return v;
  }
  return v;
}

Json resolve(const Command& cmd, const std::map<std::string, std::string>& cli, const Json& file) {
  if (!file.is_null()) {
    if (!file.is_object()) throw ConfigError("config: expected an object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      const std::string& k = it.key();
      if (k == "command") {
        if (it.value() != Json(cmd.name)) throw ConfigError("config: command does not match '" + cmd.name + "'");
        continue;
      }
      if (k == "format" || k == "out") continue;
      bool known = std::any_of(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == k; });
      if (!known) throw ConfigError("config: unknown key '" + k + "' for command '" + cmd.name + "'");
    }
  }
  Json r = Json::object();
  for (const Param& p : cmd.params) {
    auto c = cli.find(p.key);
    if (c != cli.end())
      r[p.key] = parse_value(p, c->second);
    else if (!file.is_null() && file.contains(p.key))
      r[p.key] = check_value(p, file.at(p.key));
    else if (!p.def.is_null())
      r[p.key] = p.def;
  }
  return r;
}

double real(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing parameter '" + key + "'");
  return get_real(cfg.at(key), key);
}

int integer(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("missing parameter '" + key + "'");
  return get_int(cfg.at(key), key);
}

std::uint64_t seed_of(const Json& cfg) {
  long long s = cfg.at("seed").get<long long>();
  if (s < 0) throw ConfigError("seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

std::size_t count_of(const Json& cfg, const std::string& key) {
  int v = integer(cfg, key);
  if (v < 1) throw ConfigError(key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

Json metric_spec(const Json& cfg) {
  if (!cfg.contains("metric")) throw ConfigError("missing parameter 'metric'");
  return cfg.at("metric");
}

// A point given as "a,b,..." or as a JSON array.
Vec parse_point(const Json& v, int n, const std::string& where) {
  if (v.is_array()) return get_vec(v, n, where);
  if (!v.is_string()) throw ConfigError(where + ": expected a point");
  std::string s = v.get<std::string>();
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  Vec out(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> out[i])) throw ConfigError(where + ": expected " + std::to_string(n) + " coordinates");
  std::string rest;
  if (in >> rest) throw ConfigError(where + ": too many coordinates");
  return out;
}

// ---------------------------------------------------------------------------
// JSON views of library results.

Json bound_json(const finsler::BoundReport& b) {
  Json o;
  o["name"] = b.name;
  o["inputs"] = named_values(b.inputs);
  Json arms = Json::object();
  for (const auto& a : b.arms) arms[a.name] = num(a.value);
  o["arms"] = arms;
  o["value"] = num(b.value);
  o["extras"] = named_values(b.extras);
  return o;
}

Json scalar_bound(const std::string& name, std::vector<std::pair<std::string, double>> inputs, double value) {
  Json o;
  o["name"] = name;
  o["inputs"] = named_values(inputs);
  o["value"] = num(value);
  return o;
}

Json sup_json(const finsler::SupEstimate& s) {
  Json o;
  o["value"] = num(s.value);
  o["sampled"] = num(s.sampled);
  o["samples"] = s.samples;
  o["seed"] = s.seed;
  Json arg = Json::array();
  for (int i = 0; i < s.argmax.size(); ++i) arg.push_back(num(s.argmax[i]));
  o["argmax"] = arg;
  Json tr = Json::array();
  for (const auto& t : s.traces) tr.push_back({{"start", num(t.start)}, {"end", num(t.end)}, {"iterations", t.iterations}});
  o["refinement"] = tr;
  return o;
}

Json injectivity_json(const finsler::InjectivityDiagnostics& d) {
  Json o;
  o["conjugate"] = num(d.conj_bound);
  o["loop"] = num(d.loop_bound);
  o["bound"] = num(d.min_bound);
  o["symmetrized_conjugate"] = num(d.sym_conj_bound);
  o["symmetrized_loop"] = num(d.sym_loop_bound);
  o["symmetrized_bound"] = num(d.sym_min_bound);
  return o;
}

Json report_json(const finsler::VerifyReport& r) {
  Json o;
  o["check"] = r.check_name;
  o["model"] = r.model;
  o["applicable"] = r.applicable;
  o["passed"] = r.passed();
  o["samples"] = r.samples;
  o["violations"] = r.violations;
  o["worst_margin"] = num(r.worst_margin);
  o["tolerance"] = num(r.tolerance);
  o["config"] = named_values(r.config);
  o["stats"] = named_values(r.stats);
  return o;
}

// ---------------------------------------------------------------------------
// Commands. Each returns the report body and sets the exit code.

Json cmd_invariants(const Json& cfg, int& code) {
  Json metric_cfg;
  auto model = load_metric(metric_spec(cfg), &metric_cfg);
  finsler::InvariantOptions opt;
  opt.samples = count_of(cfg, "samples");
  opt.seed = seed_of(cfg);
  opt.grid_resolution = integer(cfg, "grid");
  opt.volume_order = integer(cfg, "volume_order");
  opt.class_range = integer(cfg, "class_range");
  opt.estimate.refine_starts = integer(cfg, "refine_starts");
  opt.estimate.refine_iterations = integer(cfg, "refine_iterations");
  if (opt.grid_resolution < 2 || opt.volume_order < 2 || opt.class_range < 1)
    throw ConfigError("grid and volume_order must be >= 2, class_range >= 1");
  auto rep = finsler::measure_invariants(*model, opt);

  Json o;
  o["metric"] = metric_cfg;
  o["model"] = rep.model;
  o["dim"] = rep.dim;
  o["lambda_hat"] = num(rep.lambda_hat);
  o["Lambda_hat"] = num(rep.Lambda_hat);
  o["K_min"] = num(rep.K_min);
  o["K_max"] = num(rep.K_max);
  o["T_bound"] = num(rep.T_bound);
  o["diameter"] = rep.diam_hat ? num(*rep.diam_hat) : Json();
  o["volume_BH"] = rep.vol_BH ? num(*rep.vol_BH) : Json();
  o["volume_HT"] = rep.vol_HT ? num(*rep.vol_HT) : Json();
  if (rep.shortest_loop)
    o["shortest_loop"] = {{"class", rep.shortest_loop->homotopy_class}, {"length", num(rep.shortest_loop->length)}};
  else
    o["shortest_loop"] = Json();
  o["injectivity"] = injectivity_json(rep.injectivity);
  if (rep.shortest_loop)
    o["closed_geodesic_injectivity"] = bound_json(finsler::closed_geodesic_injectivity_bound(
        std::max(rep.K_max, 0.0), rep.lambda_hat, rep.shortest_loop->length));
  if (rep.dim >= 2 && rep.diam_hat && rep.vol_BH && rep.vol_HT) {
    const double k = std::max(std::abs(rep.K_min), std::abs(rep.K_max));
    const double V = std::min(*rep.vol_BH, *rep.vol_HT);
    o["injectivity_bound"] = bound_json(finsler::injectivity_bound(rep.dim, k, rep.T_bound,
                                                                   std::max(rep.Lambda_hat, 1.0), *rep.diam_hat, V));
  }
  o["estimates"] = {{"reversibility", sup_json(rep.lambda_est)},
                    {"uniformity", sup_json(rep.Lambda_est)},
                    {"K_min", sup_json(rep.K_min_est)},
                    {"K_max", sup_json(rep.K_max_est)},
                    {"T", sup_json(rep.T_est)}};
  code = kOk;
  return o;
}

struct BoundDef {
  std::vector<std::string> names;  // first is canonical
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::function<Json(const Json&)> eval;
};

const std::vector<BoundDef>& bound_table() {
  auto r = [](const Json& c, const char* k) { return real(c, k); };
  auto n_of = [](const Json& c) { return integer(c, "n"); };
  static const std::vector<BoundDef> table = {
      {{"injectivity", "thm1.1", "thm1_1"},
       {"n", "k", "tau", "Lambda", "D", "V"},
       {},
       [=](const Json& c) {
         return bound_json(finsler::injectivity_bound(n_of(c), r(c, "k"), r(c, "tau"), r(c, "Lambda"), r(c, "D"), r(c, "V")));
       }},
      {{"closed_geodesic_length", "thm3.6", "thm3_6"},
       {"n", "k", "tau", "Lambda", "D", "V"},
       {},
       [=](const Json& c) {
         return bound_json(
             finsler::closed_geodesic_length_bound(n_of(c), r(c, "k"), r(c, "tau"), r(c, "Lambda"), r(c, "D"), r(c, "V")));
       }},
      {{"closed_geodesic_injectivity", "thm3.3", "thm3_3"},
       {"k", "lambda", "loop"},
       {},
       [=](const Json& c) {
         return bound_json(finsler::closed_geodesic_injectivity_bound(r(c, "k"), r(c, "lambda"), r(c, "loop")));
       }},
      {{"convexity", "thm4.2", "thm4_2"},
       {"k", "sigma", "lambda"},
       {},
       [=](const Json& c) { return bound_json(finsler::convexity_bound(r(c, "k"), r(c, "sigma"), r(c, "lambda"))); }},
      {{"convexity_zero", "remark4.3", "remark4_3", "remark4_3_v"},
       {"k", "xi"},
       {},
       [=](const Json& c) {
         return scalar_bound("convexity_zero", {{"k", r(c, "k")}, {"xi", r(c, "xi")}},
                             finsler::convexity_zero(r(c, "k"), r(c, "xi")));
       }},
      {{"jacobi_time", "t_frak"},
       {"k", "Lambda"},
       {},
       [=](const Json& c) {
         return scalar_bound("jacobi_time", {{"k", r(c, "k")}, {"Lambda", r(c, "Lambda")}},
                             finsler::jacobi_time(r(c, "k"), r(c, "Lambda")));
       }},
      {{"mass_radius", "r_frak"},
       {"n", "k", "Lambda", "sigma"},
       {},
       [=](const Json& c) {
         return bound_json(finsler::mass_radius(n_of(c), r(c, "k"), r(c, "Lambda"), r(c, "sigma")));
       }},
      {{"condition_delta"},
       {"n", "k", "Lambda", "R", "eps1", "eps2", "sigma"},
       {"frak_C"},
       [=](const Json& c) {
         std::optional<double> fc;
         if (c.contains("frak_C")) fc = r(c, "frak_C");
         auto d = finsler::condition_delta(n_of(c), r(c, "k"), r(c, "Lambda"), r(c, "R"), r(c, "eps1"), r(c, "eps2"),
                                           r(c, "sigma"), fc);
         Json o;
         o["name"] = "condition_delta";
         o["C0"] = num(d.C0);
         o["C1"] = num(d.C1);
         o["C2"] = num(d.C2);
         o["C3"] = num(d.C3);
         o["mass_radius"] = num(d.mass_radius);
         o["radius_cap"] = num(d.radius_cap);
         o["eps1_cap"] = num(d.eps1_cap);
         o["frak_C"] = num(d.frak_C);
         o["frak_C_required"] = num(d.frak_C_required);
         o["condition_1"] = d.cond1;
         o["condition_2"] = d.cond2;
         o["condition_3"] = d.cond3;
         o["satisfied"] = d.satisfied;
         o["margin"] = num(d.margin);
         return o;
       }},
      {{"packing_count"},
       {"n", "k", "Lambda", "R_big", "R_small"},
       {},
       [=](const Json& c) {
         return scalar_bound("packing_count",
                             {{"n", n_of(c)}, {"k", r(c, "k")}, {"Lambda", r(c, "Lambda")}, {"R_big", r(c, "R_big")},
                              {"R_small", r(c, "R_small")}},
                             finsler::packing_count(n_of(c), r(c, "k"), r(c, "Lambda"), r(c, "R_big"), r(c, "R_small")));
       }},
      {{"s_k"},
       {"k", "t"},
       {},
       [=](const Json& c) { return scalar_bound("s_k", {{"k", r(c, "k")}, {"t", r(c, "t")}}, finsler::s_k(r(c, "k"), r(c, "t"))); }},
      {{"s_k_integral"},
       {"k", "n", "t"},
       {},
       [=](const Json& c) {
         return scalar_bound("s_k_integral", {{"k", r(c, "k")}, {"n", n_of(c)}, {"T", r(c, "t")}},
                             finsler::s_k_integral(r(c, "k"), n_of(c), r(c, "t")));
       }},
  };
  return table;
}

Json cmd_bounds(const Json& cfg, int& code) {
  if (!cfg.contains("name")) throw ConfigError("bounds: missing bound name");
  const std::string name = cfg.at("name").get<std::string>();
  const BoundDef* def = nullptr;
  for (const auto& b : bound_table())
    if (std::find(b.names.begin(), b.names.end(), name) != b.names.end()) def = &b;
  if (!def) throw ConfigError("bounds: unknown bound '" + name + "'");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string& k = it.key();
    if (k == "name") continue;
    bool used = std::find(def->required.begin(), def->required.end(), k) != def->required.end() ||
                std::find(def->optional.begin(), def->optional.end(), k) != def->optional.end();
    if (!used) throw ConfigError("bounds " + def->names.front() + ": parameter '" + k + "' does not apply");
  }
  for (const auto& k : def->required)
    if (!cfg.contains(k)) throw ConfigError("bounds " + def->names.front() + ": missing --" + k);
  Json o;
  o["bound"] = def->names.front();
  o["result"] = def->eval(cfg);
  code = kOk;
  return o;
}

Json cmd_verify(const Json& cfg, int& code) {
  std::vector<std::string> checks;
  if (cfg.contains("checks")) {
    if (!cfg.at("checks").is_array()) throw ConfigError("checks: expected an array of names");
    for (const auto& c : cfg.at("checks")) {
      if (!c.is_string()) throw ConfigError("checks: expected an array of names");
      for (const auto& s : finsler::suite_checks(c.get<std::string>())) checks.push_back(s);
    }
  } else {
    checks = finsler::suite_checks(cfg.at("suite").get<std::string>());
  }
  std::vector<Json> specs;
  if (cfg.contains("models")) {
    if (cfg.contains("metric")) throw ConfigError("give either 'metric' or 'models', not both");
    if (!cfg.at("models").is_array() || cfg.at("models").empty()) throw ConfigError("models: expected a non-empty array");
    for (const auto& m : cfg.at("models")) specs.push_back(m);
  } else {
    specs.push_back(metric_spec(cfg));
  }
  finsler::VerifyParams base;
  base.samples = count_of(cfg, "samples");
  base.seed = seed_of(cfg);
  base.t_max = real(cfg, "t_max");
  base.radius = real(cfg, "radius");
  if (cfg.contains("tolerance")) base.tolerance = real(cfg, "tolerance");
  if (cfg.contains("holonomy_constant")) base.holonomy_constant = real(cfg, "holonomy_constant");
  if (cfg.contains("triangle_scales")) {
    const Json& ts = cfg.at("triangle_scales");
    if (!ts.is_array()) throw ConfigError("triangle_scales: expected an array");
    base.triangle_scales.clear();
    for (const auto& v : ts) base.triangle_scales.push_back(get_real(v, "triangle_scales"));
  }
  std::map<std::string, double> tolerances;
  if (cfg.contains("tolerances")) {
    const Json& t = cfg.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances: expected an object of check -> tolerance");
    for (auto it = t.begin(); it != t.end(); ++it) {
      const auto& names = finsler::check_names();
      if (std::find(names.begin(), names.end(), it.key()) == names.end())
        throw ConfigError("tolerances: unknown check '" + it.key() + "'");
      tolerances[it.key()] = get_real(it.value(), "tolerances." + it.key());
    }
  }
  const std::size_t est_samples = count_of(cfg, "estimate_samples");

  Json models = Json::array();
  std::size_t total = 0;
  for (const Json& spec : specs) {
    Json metric_cfg;
    auto model = load_metric(spec, &metric_cfg);
    finsler::VerifyParams p = base;
    Json entry;
    entry["metric"] = metric_cfg;
    entry["model"] = model->name();
    // Missing curvature / uniformity bounds are measured, then padded so the
    // sampled (lower) estimate becomes a usable upper bound.
    if (cfg.contains("k_used")) {
      p.k_used = real(cfg, "k_used");
      entry["k_used_source"] = "given";
    } else {
      auto kr = finsler::curvature_bounds(*model, est_samples, p.seed);
      p.k_used = std::max(std::abs(kr.K_min), std::abs(kr.K_max)) * (1.0 + 1e-6) + 1e-9;
      entry["k_used_source"] = "measured";
    }
    if (cfg.contains("Lambda_used")) {
      p.Lambda_used = real(cfg, "Lambda_used");
      entry["Lambda_used_source"] = "given";
    } else {
      p.Lambda_used = std::max(1.0, finsler::uniformity(*model, est_samples, p.seed) * (1.0 + 1e-6));
      entry["Lambda_used_source"] = "measured";
    }
    entry["k_used"] = num(p.k_used);
    entry["Lambda_used"] = num(p.Lambda_used);
    Json reports = Json::array();
    for (const auto& name : checks) {
      finsler::VerifyParams q = p;
      if (auto t = tolerances.find(name); t != tolerances.end()) q.tolerance = t->second;
      auto rep = finsler::run_check(name, *model, q);
      total += rep.passed() ? 0 : rep.violations;
      reports.push_back(report_json(rep));
    }
    entry["reports"] = reports;
    models.push_back(entry);
  }
  Json o;
  o["checks"] = checks;
  o["models"] = models;
  o["total_violations"] = total;
  o["passed"] = total == 0;
  code = total == 0 ? kOk : kViolations;
  return o;
}

Json cmd_karcher(const Json& cfg, int& code) {
  Json metric_cfg;
  auto model = load_metric(metric_spec(cfg), &metric_cfg);
  const int n = model->dim();
  if (!cfg.contains("points")) throw ConfigError("missing parameter 'points'");
  finsler::MassDistribution dist;
  try {
    const Json& pts = cfg.at("points");
    if (pts.is_string()) {
      dist = finsler::read_mass_file(pts.get<std::string>(), n);
    } else if (pts.is_array()) {
      std::vector<finsler::ChartPoint> ps;
      std::vector<double> ws;
      for (const auto& row : pts) {
        Vec v = get_vec(row, n + 1, "points");
        ps.push_back(v.head(n));
        ws.push_back(v[n]);
      }
      dist = finsler::make_distribution(std::move(ps), std::move(ws));
    } else {
      throw ConfigError("points: expected a path or an array of [coords..., weight] rows");
    }
  } catch (const finsler::InvalidArgument& e) {
    throw ConfigError(std::string("points: ") + e.what());
  }
  Vec start = cfg.contains("start") ? parse_point(cfg.at("start"), n, "start") : dist.points.front();
  finsler::CenterOptions opt;
  opt.tol = real(cfg, "tol");
  opt.max_iter = integer(cfg, "max_iter");
  if (cfg.contains("regime_radius")) opt.regime_radius = real(cfg, "regime_radius");
  auto c = finsler::center_of_mass(*model, dist, start, opt);
  const finsler::Mat J = finsler::mass_field_jacobian(*model, dist, c.point, real(cfg, "jacobian_step"));
  Json o;
  o["metric"] = metric_cfg;
  o["model"] = model->name();
  o["mass_points"] = dist.size();
  o["start"] = num_array(start);
  o["center"] = num_array(c.point);
  o["residual"] = num(c.residual);
  o["iterations"] = c.iterations;
  o["converged"] = true;
  o["guaranteed"] = c.guaranteed ? Json(*c.guaranteed) : Json();
  if (opt.regime_radius) o["support_radius"] = num(c.support_radius);
  o["jacobian"] = num_matrix(J);
  o["jacobian_smallest_singular_value"] = num(finsler::smallest_singular_value(J));
  code = kOk;
  return o;
}

Json cmd_volume(const Json& cfg, int& code) {
  Json metric_cfg;
  auto model = load_metric(metric_spec(cfg), &metric_cfg);
  const std::string m = cfg.at("measure").get<std::string>();
  const int order = integer(cfg, "order");
  if (order < 2) throw ConfigError("order must be >= 2");
  bool bh = m == "both" || m == "bh" || m == "busemann_hausdorff";
  bool ht = m == "both" || m == "ht" || m == "holmes_thompson";
  if (!bh && !ht) throw ConfigError("measure: expected bh, ht or both");
  Json o;
  o["metric"] = metric_cfg;
  o["model"] = model->name();
  if (bh) o["volume_BH"] = num(finsler::volume(*model, finsler::Measure::busemann_hausdorff, order));
  if (ht) o["volume_HT"] = num(finsler::volume(*model, finsler::Measure::holmes_thompson, order));
  code = kOk;
  return o;
}

Json cmd_constants(const Json& cfg, int& code) {
  const int n = integer(cfg, "n");
  const double k = real(cfg, "k"), L = real(cfg, "Lambda");
  if (n < 2 || k < 0.0 || L < 1.0) throw ConfigError("constants: need n >= 2, k >= 0, Lambda >= 1");
  Json o;
  o["C0"] = num(finsler::condition_C0(k, L));
  o["C1"] = num(finsler::condition_C1(n, k, L));
  o["C2"] = num(finsler::condition_C2(k, L));
  o["jacobi_time"] = num(finsler::jacobi_time(k, L));
  o["convexity_zero"] = num(finsler::convexity_zero(k, 0.0));
  o["holonomy_constant"] = num(finsler::default_holonomy_constant(n, k, L));
  if (cfg.contains("sigma")) o["mass_radius"] = bound_json(finsler::mass_radius(n, k, L, real(cfg, "sigma")));
  code = kOk;
  return o;
}

using Handler = Json (*)(const Json&, int&);

std::vector<Param> metric_param() { return {{"metric", Kind::json, Json(), "metric config file (or inline object in --config)"}}; }

std::vector<std::pair<Command, Handler>> commands() {
  std::vector<Param> bound_params;
  for (const char* k : {"k", "tau", "Lambda", "D", "V", "sigma", "lambda", "xi", "R", "eps1", "eps2", "frak_C", "R_big",
                        "R_small", "loop", "t"})
    bound_params.push_back({k, Kind::real, Json(), ""});
  bound_params.insert(bound_params.begin(), {"n", Kind::integer, Json(), "dimension"});
  bound_params.insert(bound_params.begin(), {"name", Kind::text, Json(), "bound name"});

  auto with_metric = [](std::vector<Param> extra) {
    auto v = metric_param();
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  return {
      {{"invariants",
        "Measure reversibility, uniformity, curvature range, T-curvature, diameter, volumes and loop lengths",
        with_metric({{"samples", Kind::integer, 200, "random samples per supremum"},
                     {"seed", Kind::integer, 1, "random seed"},
                     {"grid", Kind::integer, 32, "diameter grid resolution"},
                     {"volume_order", Kind::integer, 32, "volume quadrature order"},
                     {"class_range", Kind::integer, 3, "closed-geodesic class range"},
                     {"refine_starts", Kind::integer, 5, "Nelder-Mead starts"},
                     {"refine_iterations", Kind::integer, 200, "Nelder-Mead iterations"}})},
       &cmd_invariants},
      {{"bounds", "Evaluate a closed-form bound", bound_params}, &cmd_bounds},
      {{"verify", "Run sampled inequality checks",
        with_metric({{"suite", Kind::text, "all", "jacobi | berwald | all | appendixA | appendixB | <check>"},
                     {"checks", Kind::json, Json(), "explicit list of checks or suites"},
                     {"models", Kind::json, Json(), "list of metric configs (config file only)"},
                     {"samples", Kind::integer, 100, "samples per check"},
                     {"seed", Kind::integer, 1, "random seed"},
                     {"k_used", Kind::real, Json(), "curvature bound; measured when absent"},
                     {"Lambda_used", Kind::real, Json(), "uniformity bound; measured when absent"},
                     {"tolerance", Kind::real, Json(), "tolerance for every check"},
                     {"tolerances", Kind::json, Json(), "per-check tolerances"},
                     {"t_max", Kind::real, 1.5, "longest geodesic time"},
                     {"radius", Kind::real, 0.3, "distance-comparison radius"},
                     {"triangle_scales", Kind::json, Json(), "holonomy triangle sizes"},
                     {"holonomy_constant", Kind::real, Json(), "holonomy constant"},
                     {"estimate_samples", Kind::integer, 200, "samples for measured bounds"}})},
       &cmd_verify},
      {{"karcher", "Center of mass of a weighted point set",
        with_metric({{"points", Kind::json, Json(), "mass file: rows of coords and weight"},
                     {"start", Kind::json, Json(), "start point a,b,...; first mass point when absent"},
                     {"tol", Kind::real, 1e-10, "residual tolerance"},
                     {"max_iter", Kind::integer, 100, "iteration budget"},
                     {"regime_radius", Kind::real, Json(), "radius for the guaranteed-regime flag"},
                     {"jacobian_step", Kind::real, 1e-5, "finite-difference step"}})},
       &cmd_karcher},
      {{"volume", "Busemann-Hausdorff and Holmes-Thompson volume",
        with_metric({{"measure", Kind::text, "both", "bh | ht | both"},
                     {"order", Kind::integer, 64, "quadrature order"}})},
       &cmd_volume},
      {{"constants", "Comparison constants for (n, k, Lambda)",
        {{"n", Kind::integer, Json(), "dimension"},
         {"k", Kind::real, Json(), "curvature bound"},
         {"Lambda", Kind::real, Json(), "uniformity bound"},
         {"sigma", Kind::real, Json(), "injectivity radius, enables the mass radius"}}},
       &cmd_constants},
  };
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finsler geometry toolkit: invariants, bounds, verification, centers of mass, volumes"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path, format, config_path;
  app.add_option("--out,-o", out_path, "output file (stdout when absent)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--config", config_path, "JSON run config; flags override its entries");

  struct Live {
    Command cmd;
    Handler handler;
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> cli;  // raw flag values
  };
  std::vector<Live> cmds;
  for (auto& [c, h] : commands()) cmds.push_back(Live{c, h, nullptr, {}});
  for (Live& live : cmds) {
    const Command& cmd = live.cmd;
    live.sub = app.add_subcommand(cmd.name, cmd.help);
    for (const Param& p : cmd.params) {
      if (p.key == "models" || p.key == "checks" || p.key == "tolerances" || p.key == "triangle_scales") continue;
      if (cmd.name == "bounds" && p.key == "name") {
        live.sub->add_option_function<std::string>(
            "name", [&live](const std::string& v) { live.cli["name"] = v; }, "bound name");
        continue;
      }
      std::string flag = "--" + p.key;
      if (p.key.find('_') != std::string::npos) {
        std::string dashed = p.key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        flag += ",--" + dashed;
      }
      std::string help = p.help;
      if (!p.def.is_null()) help += " [" + (p.def.is_string() ? p.def.get<std::string>() : p.def.dump()) + "]";
      live.sub->add_option_function<std::string>(
          flag, [&live, key = p.key](const std::string& v) { live.cli[key] = v; }, help);
    }
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "finslerctl: " << e.what() << "\n";
    return kConfigError;
  }

  for (const Live& live : cmds) {
    if (!live.sub->parsed()) continue;
    const Command& cmd = live.cmd;
    try {
      Json file;
      if (!config_path.empty()) file = read_json_file(config_path);
      if (format.empty() && file.is_object() && file.contains("format")) format = file.at("format").get<std::string>();
      if (out_path.empty() && file.is_object() && file.contains("out")) out_path = file.at("out").get<std::string>();
      if (format.empty()) format = "json";
      if (format != "json" && format != "csv") throw ConfigError("--format: expected json or csv");
      Json cfg = resolve(cmd, live.cli, file);

      int code = kOk;
      Json body = live.handler(cfg, code);
      Json doc;
      doc["command"] = cmd.name;
      doc["config"] = cfg;
      for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
      const std::string text = format == "json" ? to_json_text(doc) : to_csv_text(doc);
      if (out_path.empty())
        out << text;
      else
        write_file(out_path, text);
      return code;
    } catch (const finsler::NumericalFailure& e) {
      err << "finslerctl: numerical failure: " << e.what() << "\n";
      return kNumericalFailure;
    } catch (const finsler::InvalidArgument& e) {
      err << "finslerctl: configuration error: " << e.what() << "\n";
      return kConfigError;
    } catch (const nlohmann::json::exception& e) {
      err << "finslerctl: configuration error: " << e.what() << "\n";
      return kConfigError;
    } catch (const std::exception& e) {
      err << "finslerctl: " << e.what() << "\n";
      return kNumericalFailure;
    }
  }
  return kConfigError;
}

}  // namespace finslerctl
