#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hardy/admissibility.hpp"
#include "hardy/errors.hpp"
#include "hardy/exponents.hpp"
#include "hardy/functionals.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/spaces.hpp"
#include "hardy/weights.hpp"

namespace hardy {

using ordered_json = nlohmann::ordered_json;

/// Exit taxonomy of a harness run. A divergent characterizing integral whose
/// divergence comes from the outer integrand is a *finding*, not a failure,
/// so it exits 0; divergence of a weight hypothesis is a precondition
/// violation.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_precondition = 3,
  exit_numeric = 4,
  exit_indeterminate = 5,
};

struct RunConfig {
  std::string task;
  SpaceModel space = SpaceModel::homogeneous(1.0);
  std::optional<Geometry> geometry;  // set for the analytic models
  std::optional<ExponentConfig> exponents;
  double p_only = 0.0;  // prop2 needs p but no q
  std::optional<RadialWeight> u, v, w, b;
  FunctionalOptions options{};
  double boundary_eps = 1e-9;
  std::optional<ScanAxis> scan1, scan2;
  ordered_json test_function;  // descriptor, resolved at dispatch time
  ordered_json echo;           // the whole config, for the report
};

struct RunOutcome {
  int exit_code = exit_ok;
  ordered_json report;
  std::string csv;  // scan task only
};

namespace detail {

inline double require_number(const ordered_json& j, const char* key,
                             const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw domain_error(std::string(where) + " needs a numeric '" + key + "'");
  return j.at(key).get<double>();
}

inline RadialWeight weight_from_json(const ordered_json& j, const char* where) {
  if (!j.is_object() || !j.contains("family"))
    throw domain_error(std::string(where) + " weight needs a 'family'");
  const std::string family = j.at("family").get<std::string>();
  if (family == "power") return RadialWeight::power(require_number(j, "beta", where));
  if (family == "piecewise_power")
    return RadialWeight::piecewise_power(require_number(j, "alpha1", where),
                                         require_number(j, "alpha2", where),
                                         j.value("break", 1.0));
  if (family == "sinh_power")
    return RadialWeight::sinh_power(require_number(j, "beta", where),
                                    j.value("scale", 1.0));
  if (family == "sinh_piecewise_power")
    return RadialWeight::sinh_piecewise_power(require_number(j, "alpha1", where),
                                              require_number(j, "alpha2", where),
                                              j.value("scale", 1.0));
  throw domain_error(std::string(where) + ": unknown weight family '" + family + "'");
}

inline std::pair<SpaceModel, std::optional<Geometry>> space_from_json(
    const ordered_json& j) {
  if (!j.is_object() || !j.contains("model"))
    throw domain_error("space needs a 'model'");
  const std::string model = j.at("model").get<std::string>();
  const double mass = j.value("mass", 1.0);
  if (model == "homogeneous") {
    const double dim = require_number(j, "dimension", "homogeneous space");
    return {SpaceModel::homogeneous(dim, mass), Geometry::homogeneous(dim)};
  }
  if (model == "hyperbolic") {
    const double dim = require_number(j, "dimension", "hyperbolic space");
    return {SpaceModel::hyperbolic(dim, mass), Geometry::hyperbolic(dim)};
  }
  if (model == "cartan_hadamard") {
    const double dim = require_number(j, "dimension", "cartan_hadamard space");
    const double b = require_number(j, "curvature", "cartan_hadamard space");
    return {SpaceModel::cartan_hadamard(dim, b, mass),
            Geometry::cartan_hadamard(dim, b)};
  }
  throw domain_error("unknown space model '" + model + "'");
}

inline ScanAxis scan_axis_from_json(const ordered_json& j) {
  ScanAxis a;
  if (!j.contains("parameter") || !j.at("parameter").is_string())
    throw domain_error("scan needs a 'parameter' name");
  a.parameter = j.at("parameter").get<std::string>();
  a.from = require_number(j, "from", "scan");
  a.to = require_number(j, "to", "scan");
  a.step = require_number(j, "step", "scan");
  return a;
}

inline const RadialWeight& require_weight(const std::optional<RadialWeight>& w,
                                          const char* key, const char* task) {
  if (!w)
    throw domain_error(std::string("task '") + task + "' needs weights." + key);
  return *w;
}

inline const ExponentConfig& require_exponents(const RunConfig& cfg) {
  if (!cfg.exponents)
    throw domain_error("task '" + cfg.task + "' needs exponents p and q");
  return *cfg.exponents;
}

inline const Geometry& require_geometry(const RunConfig& cfg) {
  if (!cfg.geometry)
    throw domain_error("task '" + cfg.task +
                       "' needs an analytic space model (homogeneous, "
                       "hyperbolic or cartan_hadamard)");
  return *cfg.geometry;
}

/// Pulls the power-scale parameters out of the configured weight pair; the
/// canonical plain and sinh-power families carry them.
inline PowerWeightParams params_from_weights(const RunConfig& cfg) {
  PowerWeightParams out;
  const RadialWeight& u = require_weight(cfg.u, "u", cfg.task.c_str());
  const RadialWeight& v = require_weight(cfg.v, "v", cfg.task.c_str());
  if (const auto* pw = u.as<PiecewisePowerWeight>()) {
    out.alpha1 = pw->alpha_inner;
    out.alpha2 = pw->alpha_outer;
  } else if (const auto* spw = u.as<SinhPiecewisePowerWeight>()) {
    out.alpha1 = spw->alpha_inner;
    out.alpha2 = spw->alpha_outer;
  } else if (const auto* p = u.as<PowerWeight>()) {
    out.alpha1 = out.alpha2 = p->beta;
  } else if (const auto* sp = u.as<SinhPowerWeight>()) {
    out.alpha1 = out.alpha2 = sp->beta;
  } else {
    throw domain_error("admissibility analysis needs a (piecewise) power or "
                       "sinh-power u-weight");
  }
  if (const auto* p = v.as<PowerWeight>()) out.beta = p->beta;
  else if (const auto* sp = v.as<SinhPowerWeight>()) out.beta = sp->beta;
  else throw domain_error("admissibility analysis needs a power or sinh-power v-weight");
  return out;
}

inline const char* to_string(FinitenessClass k) {
  switch (k) {
    case FinitenessClass::finite: return "finite";
    case FinitenessClass::divergent_near_zero: return "divergent_near_zero";
    case FinitenessClass::divergent_at_infinity: return "divergent_at_infinity";
    case FinitenessClass::indeterminate:
    default: return "indeterminate";
  }
}

inline const char* to_string(DivergenceOrigin o) {
  switch (o) {
    case DivergenceOrigin::none: return "none";
    case DivergenceOrigin::weight_u: return "weight_u";
    case DivergenceOrigin::weight_v: return "weight_v";
    case DivergenceOrigin::outer:
    default: return "outer";
  }
}

inline ordered_json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

inline ordered_json quad_json(const QuadResult& r) {
  ordered_json j;
  j["value"] = finite_or_null(r.value);
  j["abs_err"] = finite_or_null(r.abs_err);
  j["evaluations"] = r.evaluations;
  j["converged"] = r.converged;
  return j;
}

inline ordered_json verdict_json(const FinitenessVerdict& v) {
  ordered_json j;
  j["class"] = to_string(v.kind);
  j["origin"] = to_string(v.origin);
  j["fitted_exponent"] = finite_or_null(v.fitted_exponent);
  j["fitted_rate"] = finite_or_null(v.fitted_rate);
  j["integral"] = v.integral ? quad_json(*v.integral) : ordered_json(nullptr);
  j["detail"] = v.detail;
  return j;
}

inline ordered_json admissibility_json(const AdmissibilityVerdict& v) {
  ordered_json j;
  j["admissible"] = v.admissible;
  j["boundary"] = v.boundary;
  j["branch"] = v.branch;
  j["unsupported"] = v.unsupported ? ordered_json(*v.unsupported) : ordered_json(nullptr);
  ordered_json conds = ordered_json::array();
  for (const auto& c : v.conditions) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["relation"] = std::string(1, c.relation);
    cj["satisfied"] = c.satisfied;
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  return j;
}

inline ordered_json inequality_json(const InequalityCheck& c) {
  ordered_json j;
  j["lhs"] = quad_json(c.lhs);
  j["rhs"] = quad_json(c.rhs);
  j["ratio"] = finite_or_null(c.ratio);
  j["bound"] = c.bound;
  j["ok"] = c.ok;
  j["vacuous"] = c.vacuous;
  j["lhs_class"] = to_string(c.lhs_class);
  j["rhs_class"] = to_string(c.rhs_class);
  return j;
}

inline ordered_json exponents_json(const ExponentConfig& e) {
  ordered_json j;
  j["p"] = e.p;
  j["q"] = e.q;
  j["r"] = e.r;
  j["p_conj"] = e.p_conj;
  return j;
}

inline ordered_json report_json(const HardyReport& r) {
  ordered_json j;
  j["exponents"] = exponents_json(r.exponents);
  j["bracket"] = ordered_json{{"lower_factor", r.bracket.lower_factor},
                              {"upper_factor", r.bracket.upper_factor}};
  j["a2"] = verdict_json(r.a2);
  j["a1"] = verdict_json(r.a1);
  j["lemma1_residual"] = finite_or_null(r.lemma1_residual);
  j["lower_bound"] = finite_or_null(r.lower_bound);
  j["upper_bound"] = finite_or_null(r.upper_bound);
  j["c_near_extremal"] = finite_or_null(r.c_near_extremal);
  j["applicable"] = r.applicable;
  j["sandwich_ok"] = r.sandwich_ok;
  j["tol"] = r.tol;
  return j;
}

inline int verdict_exit(const FinitenessVerdict& v) {
  switch (v.kind) {
    case FinitenessClass::finite:
      return v.integral && v.integral->converged ? exit_ok : exit_numeric;
    case FinitenessClass::indeterminate:
      return exit_indeterminate;
    default:
      return v.origin == DivergenceOrigin::outer ? exit_ok : exit_precondition;
  }
}

inline TestFunction build_test_function(const RunConfig& cfg) {
  const ordered_json& j = cfg.test_function;
  const std::string kind =
      j.is_object() ? j.value("kind", "near_extremal") : "near_extremal";
  if (kind == "near_extremal") {
    const char* task = cfg.task.c_str();
    return build_near_extremal(require_weight(cfg.u, "u", task),
                               require_weight(cfg.v, "v", task),
                               require_exponents(cfg), cfg.space, cfg.options);
  }
  if (kind == "power_bump")
    return TestFunction::power_bump(require_number(j, "exponent", "power_bump"),
                                    require_number(j, "cutoff", "power_bump"));
  if (kind == "constant") return TestFunction::constant(j.value("value", 1.0));
  if (kind == "exp_decay")
    return TestFunction::exp_decay(require_number(j, "rate", "exp_decay"));
  if (kind == "capped_power")
    return TestFunction::capped_power(require_number(j, "exponent", "capped_power"),
                                      require_number(j, "cap", "capped_power"));
  throw domain_error("unknown test_function kind '" + kind + "'");
}

} // namespace detail

inline RunConfig parse_config(const ordered_json& j) {
  if (!j.is_object()) throw domain_error("config must be a JSON object");
  RunConfig cfg;
  cfg.echo = j;
  if (!j.contains("task") || !j.at("task").is_string())
    throw domain_error("config needs a 'task' string");
  cfg.task = j.at("task").get<std::string>();
  static const std::vector<std::string> known = {
      "a2", "a1", "lemma1", "sandwich", "admissible",
      "scan", "prop1", "prop2", "ratio"};
  if (std::find(known.begin(), known.end(), cfg.task) == known.end())
    throw domain_error("unknown task '" + cfg.task + "'");

  if (!j.contains("space")) throw domain_error("config needs a 'space'");
  auto [space, geom] = detail::space_from_json(j.at("space"));
  cfg.space = std::move(space);
  cfg.geometry = geom;

  if (j.contains("exponents")) {
    const auto& ej = j.at("exponents");
    cfg.p_only = detail::require_number(ej, "p", "exponents");
    if (ej.contains("q"))
      cfg.exponents = derive_exponents(cfg.p_only,
                                       detail::require_number(ej, "q", "exponents"));
  }

  if (j.contains("weights")) {
    const auto& wj = j.at("weights");
    if (wj.contains("u")) cfg.u = detail::weight_from_json(wj.at("u"), "u");
    if (wj.contains("v")) cfg.v = detail::weight_from_json(wj.at("v"), "v");
    if (wj.contains("w")) cfg.w = detail::weight_from_json(wj.at("w"), "w");
    if (wj.contains("b")) cfg.b = detail::weight_from_json(wj.at("b"), "b");
  }

  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    if (tj.contains("abs_tol")) cfg.options.quad.abs_tol = tj.at("abs_tol").get<double>();
    if (tj.contains("rel_tol")) cfg.options.quad.rel_tol = tj.at("rel_tol").get<double>();
    if (tj.contains("sandwich_tol"))
      cfg.options.sandwich_tol = tj.at("sandwich_tol").get<double>();
    if (tj.contains("bound_tol")) cfg.options.bound_tol = tj.at("bound_tol").get<double>();
    if (tj.contains("margin")) cfg.options.classify.margin = tj.at("margin").get<double>();
    if (tj.contains("epsilon")) cfg.options.epsilon = tj.at("epsilon").get<double>();
    if (tj.contains("boundary_eps")) cfg.boundary_eps = tj.at("boundary_eps").get<double>();
    if (tj.contains("max_evaluations"))
      cfg.options.quad.max_evaluations = tj.at("max_evaluations").get<std::int64_t>();
  }

  if (j.contains("scan")) {
    const auto& sj = j.at("scan");
    cfg.scan1 = detail::scan_axis_from_json(sj);
    if (sj.contains("parameter2"))
      cfg.scan2 = detail::scan_axis_from_json(sj.at("parameter2"));
  }

  if (j.contains("test_function")) cfg.test_function = j.at("test_function");
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw io_error("config parse error in " + path + ": " + ex.what());
  }
  return parse_config(j);
}

/// Deterministic CSV for scan results: fixed header, one row per grid node
/// in sweep order, 9 significant digits, LF line endings.
inline std::string emit_csv(const std::vector<ScanRow>& rows) {
  std::string out = "param1,param2,admissible,boundary,C1,C2,C3,C4\n";
  char buf[64];
  const auto fmt = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    out += fmt(r.param1);
    out += ',';
    if (!std::isnan(r.param2)) out += fmt(r.param2);
    out += ',';
    out += r.verdict.admissible ? '1' : '0';
    out += ',';
    out += r.verdict.boundary ? '1' : '0';
    for (const auto& c : r.verdict.conditions) {
      out += ',';
      out += fmt(c.value);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline int dispatch_task(const RunConfig& cfg, int threads, ordered_json& results,
                         std::string& csv) {
  const char* task = cfg.task.c_str();

  if (cfg.task == "a2" || cfg.task == "a1") {
    const auto& e = require_exponents(cfg);
    auto pl = std::make_shared<Pipeline>(cfg.space,
                                         require_weight(cfg.u, "u", task),
                                         require_weight(cfg.v, "v", task), e,
                                         cfg.options);
    const FinitenessVerdict v = characterize(
        pl, cfg.task == "a2" ? WhichFunctional::a2 : WhichFunctional::a1);
    results[cfg.task] = verdict_json(v);
    return verdict_exit(v);
  }

  if (cfg.task == "lemma1") {
    const auto& e = require_exponents(cfg);
    auto pl = std::make_shared<Pipeline>(cfg.space,
                                         require_weight(cfg.u, "u", task),
                                         require_weight(cfg.v, "v", task), e,
                                         cfg.options);
    const FinitenessVerdict a2 = characterize(pl, WhichFunctional::a2);
    const FinitenessVerdict a1 = characterize(pl, WhichFunctional::a1);
    results["a2"] = verdict_json(a2);
    results["a1"] = verdict_json(a1);
    const bool applicable = a2.finite() && a1.finite();
    results["applicable"] = applicable;
    if (applicable) {
      results["lemma1_residual"] = residual_between(a2, a1, e);
      const int e2 = verdict_exit(a2), e1 = verdict_exit(a1);
      return std::max(e2, e1);
    }
    results["lemma1_residual"] = nullptr;
    return std::max(verdict_exit(a2), verdict_exit(a1));
  }

  if (cfg.task == "sandwich") {
    const auto& e = require_exponents(cfg);
    const HardyReport rep = verify_sandwich(
        require_weight(cfg.u, "u", task), require_weight(cfg.v, "v", task), e,
        cfg.space, cfg.options.sandwich_tol, cfg.options);
    results["sandwich"] = report_json(rep);
    if (!rep.applicable) return std::max(verdict_exit(rep.a2), verdict_exit(rep.a1));
    const bool conv = rep.a2.integral->converged && rep.a1.integral->converged;
    return conv ? exit_ok : exit_numeric;
  }

  if (cfg.task == "ratio") {
    const auto& e = require_exponents(cfg);
    auto pl = std::make_shared<Pipeline>(cfg.space,
                                         require_weight(cfg.u, "u", task),
                                         require_weight(cfg.v, "v", task), e,
                                         cfg.options);
    const TestFunction f = build_test_function(cfg);
    const RatioSides sides = hardy_ratio_sides(pl, f);
    results["test_function"] = f.kind();
    results["lhs"] = quad_json(sides.lhs);
    results["rhs"] = quad_json(sides.rhs);
    results["ratio"] = finite_or_null(sides.ratio);
    return sides.lhs.converged && sides.rhs.converged ? exit_ok : exit_numeric;
  }

  if (cfg.task == "admissible") {
    const auto& e = require_exponents(cfg);
    const Geometry& g = require_geometry(cfg);
    const PowerWeightParams params = params_from_weights(cfg);
    const AdmissibilityVerdict v = check_admissible(g, params, e, cfg.boundary_eps);
    results["params"] = ordered_json{{"alpha1", params.alpha1},
                                     {"alpha2", params.alpha2},
                                     {"beta", params.beta}};
    results["admissibility"] = admissibility_json(v);
    return v.unsupported ? exit_indeterminate : exit_ok;
  }

  if (cfg.task == "scan") {
    if (!cfg.scan1) throw domain_error("task 'scan' needs a scan descriptor");
    const auto& e = require_exponents(cfg);
    const Geometry& g = require_geometry(cfg);
    const PowerWeightParams base = params_from_weights(cfg);
    const std::vector<ScanRow> rows =
        region_scan(g, base, *cfg.scan1, cfg.scan2, e, threads, cfg.boundary_eps);
    csv = emit_csv(rows);
    std::size_t admissible = 0, boundary = 0;
    for (const auto& r : rows) {
      admissible += r.verdict.admissible ? 1 : 0;
      boundary += r.verdict.boundary ? 1 : 0;
    }
    results["row_count"] = rows.size();
    results["admissible_count"] = admissible;
    results["boundary_count"] = boundary;
    return exit_ok;
  }

  if (cfg.task == "prop2") {
    const double p = cfg.exponents ? cfg.exponents->p : cfg.p_only;
    if (!(p > 1.0)) throw domain_error("task 'prop2' needs exponents.p > 1");
    const TestFunction f = build_test_function(cfg);
    const InequalityCheck c = check_prop2(f, require_weight(cfg.w, "w", task), p,
                                          cfg.space, cfg.options);
    results["prop2"] = inequality_json(c);
    if (c.lhs_class == FinitenessClass::indeterminate ||
        c.rhs_class == FinitenessClass::indeterminate)
      return exit_indeterminate;
    if (c.lhs_class == FinitenessClass::finite &&
        c.rhs_class == FinitenessClass::finite &&
        (!c.lhs.converged || !c.rhs.converged))
      return exit_numeric;
    return exit_ok;
  }

  if (cfg.task == "prop1") {
    const auto& e = require_exponents(cfg);
    const TestFunction f = build_test_function(cfg);
    const InequalityCheck c =
        check_prop1(f, require_weight(cfg.u, "u", task),
                    require_weight(cfg.b, "b", task), e, cfg.space, cfg.options);
    results["prop1"] = inequality_json(c);
    if (c.lhs_class == FinitenessClass::indeterminate ||
        c.rhs_class == FinitenessClass::indeterminate)
      return exit_indeterminate;
    if (c.lhs_class == FinitenessClass::finite &&
        c.rhs_class == FinitenessClass::finite &&
        (!c.lhs.converged || !c.rhs.converged))
      return exit_numeric;
    return exit_ok;
  }

  throw domain_error("unknown task '" + cfg.task + "'");
}

inline const char* status_of(int exit_code) {
  switch (exit_code) {
    case exit_ok: return "ok";
    case exit_config: return "config_error";
    case exit_precondition: return "precondition_failed";
    case exit_numeric: return "did_not_converge";
    case exit_indeterminate: return "indeterminate";
    default: return "error";
  }
}

} // namespace detail

/// Executes one configured task. Everything in the returned report except
/// wall_time_seconds is a deterministic function of the config (and, for
/// scans, independent of the thread count).
inline RunOutcome run(const RunConfig& cfg, int threads = 1, bool verbose = false) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.report["schema_version"] = "1.0";
  out.report["task"] = cfg.task;
  out.report["config"] = cfg.echo;
  ordered_json results = ordered_json::object();
  try {
    out.exit_code = detail::dispatch_task(cfg, threads, results, out.csv);
  } catch (const domain_error& ex) {
    out.exit_code = exit_config;
    out.report["error"] = ordered_json{{"kind", "config"}, {"message", ex.what()}};
  } catch (const io_error& ex) {
    out.exit_code = exit_config;
    out.report["error"] = ordered_json{{"kind", "io"}, {"message", ex.what()}};
  } catch (const precondition_error& ex) {
    out.exit_code = exit_precondition;
    out.report["error"] = ordered_json{{"kind", "precondition"},
                                       {"clause", ex.clause()},
                                       {"message", ex.what()}};
  } catch (const evaluation_error& ex) {
    out.exit_code = exit_numeric;
    out.report["error"] = ordered_json{{"kind", "evaluation"}, {"message", ex.what()}};
  } catch (const std::exception& ex) {
    out.exit_code = exit_numeric;
    out.report["error"] = ordered_json{{"kind", "internal"}, {"message", ex.what()}};
  }
  out.report["results"] = std::move(results);
  out.report["status"] = detail::status_of(out.exit_code);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report["wall_time_seconds"] = wall;
  if (verbose)
    std::fprintf(stderr, "[hardy] task=%s status=%s wall=%.3fs\n", cfg.task.c_str(),
                 detail::status_of(out.exit_code), wall);
  return out;
}

} // namespace hardy
