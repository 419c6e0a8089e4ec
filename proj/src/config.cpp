#include "parhyb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace parhyb {

namespace {

using nlohmann::json;

const std::set<std::string> kFormulas = {
    "const", "inv_n1", "inv_log_log", "log_over_n", "one_plus_inv_sq"};

double raw_schedule_value(const ScheduleSpec& spec, int n) {
  if (spec.formula == "const") return spec.value;
  if (spec.formula == "inv_n1") return 1.0 / (n + 1);
  if (spec.formula == "inv_log_log") {
    const double inner_log = std::log(n + spec.offset);
    if (inner_log <= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::log(inner_log);
  }
  if (spec.formula == "log_over_n") {
    return n >= 2 ? std::log(double(n)) / n : 1.0;
  }
  if (spec.formula == "one_plus_inv_sq") {
    return 1.0 + 1.0 / ((n + 1.0) * (n + 1.0));
  }
  throw InvalidParams("unknown schedule formula '" + spec.formula + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParams(std::string("config: ") + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidParams(std::string("config field '") + key + "': " +
                        e.what());
  }
}

std::vector<double> get_array(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  try {
    return j.at(key).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InvalidParams(std::string("config field '") + key + "': " +
                        e.what());
  }
}

ScheduleSpec parse_schedule(const json& j, const char* key,
                            ScheduleSpec fallback) {
  if (!j.contains(key)) return fallback;
  const json& s = j.at(key);
  if (!s.is_object()) {
    throw InvalidParams(std::string("schedule '") + key +
                        "' must be an object");
  }
  ScheduleSpec spec;
  spec.formula = get_or<std::string>(s, "formula", "const");
  if (kFormulas.find(spec.formula) == kFormulas.end()) {
    std::string allowed;
    for (const auto& f : kFormulas) allowed += " " + f;
    throw InvalidParams("schedule '" + std::string(key) +
                        "': unknown formula '" + spec.formula +
                        "'; allowed:" + allowed);
  }
  spec.value = get_or<double>(s, "value", 0.0);
  spec.offset = get_or<double>(s, "offset", 10.0);
  if (s.contains("min")) spec.min = s.at("min").get<double>();
  if (s.contains("max")) spec.max = s.at("max").get<double>();
  return spec;
}

MethodKind parse_method(const std::string& name) {
  if (name == "A") return MethodKind::a_asymptotic;
  if (name == "A-quasi") return MethodKind::a_quasi;
  if (name == "B") return MethodKind::b_asymptotic;
  if (name == "B-quasi") return MethodKind::b_quasi;
  if (name == "mann") return MethodKind::mann;
  throw InvalidParams("config: method must be one of A, B, A-quasi, B-quasi, "
                      "mann (got '" + name + "')");
}

}  // namespace

double schedule_value(const ScheduleSpec& spec, int n) {
  double v = raw_schedule_value(spec, n);
  if (spec.min && v < *spec.min) v = *spec.min;
  if (spec.max && v > *spec.max) v = *spec.max;
  return v;
}

Schedule make_schedule(const ScheduleSpec& spec) {
  if (kFormulas.find(spec.formula) == kFormulas.end()) {
    throw InvalidParams("unknown schedule formula '" + spec.formula + "'");
  }
  return [spec](int n) { return schedule_value(spec, n); };
}

bool schedule_decays_to_zero(const ScheduleSpec& spec) {
  if (spec.min && *spec.min > 0.0) return false;
  if (spec.formula == "const") return spec.value == 0.0;
  return spec.formula == "inv_n1" || spec.formula == "log_over_n" ||
         spec.formula == "inv_log_log";
}

WeightSchedule make_weight_schedule(const WeightSpec& spec, int n_mappings) {
  if (n_mappings < 1) {
    throw InvalidParams("weight schedule needs at least one mapping");
  }
  if (spec.formula == "uniform") {
    std::vector<double> row(n_mappings + 1, 1.0 / (n_mappings + 1));
    return [row](int) { return row; };
  }
  if (spec.formula == "head") {
    if (!(spec.alpha0 > 0.0 && spec.alpha0 < 1.0)) {
      throw InvalidParams("head weights need alpha0 in (0, 1)");
    }
    std::vector<double> row(n_mappings + 1,
                            (1.0 - spec.alpha0) / n_mappings);
    row[0] = spec.alpha0;
    return [row](int) { return row; };
  }
  throw InvalidParams("unknown weight formula '" + spec.formula +
                      "'; allowed: uniform head");
}

std::string method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::a_asymptotic: return "A";
    case MethodKind::a_quasi: return "A-quasi";
    case MethodKind::b_asymptotic: return "B";
    case MethodKind::b_quasi: return "B-quasi";
    case MethodKind::mann: return "mann";
  }
  return "?";
}

RunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  RunConfig cfg;

  if (j.contains("problem")) {
    const json& p = j.at("problem");
    cfg.problem_id = get_or<std::string>(p, "id", "poly_ramp");
    if (cfg.problem_id == "poly_ramp") {
      cfg.poly_ramp.M = get_or<int>(p, "M", 10);
      cfg.poly_ramp.N = get_or<int>(p, "N", 10);
      cfg.poly_ramp.K = get_or<int>(p, "K", 10);
      cfg.poly_ramp.t = get_array(p, "t");
      cfg.poly_ramp.s = get_array(p, "s");
      cfg.poly_ramp.xi = get_array(p, "xi");
      cfg.poly_ramp.eta = get_array(p, "eta");
      cfg.poly_ramp.eval_cost_ms = get_or<double>(p, "eval_cost_ms", 0.0);
      cfg.random_instance = get_or<bool>(p, "random_instance", false);
    } else if (cfg.problem_id == "ball_box") {
      cfg.ball_box.dimension = get_or<int>(p, "dimension", 5);
      cfg.ball_box.box_lo = get_array(p, "box_lo");
      cfg.ball_box.box_hi = get_array(p, "box_hi");
      cfg.ball_box.ball_center = get_array(p, "ball_center");
      cfg.ball_box.ball_radius = get_or<double>(p, "ball_radius", 0.3);
    } else {
      throw InvalidParams("config: unknown problem id '" + cfg.problem_id +
                          "'; known: poly_ramp, ball_box");
    }
  }

  if (j.contains("method")) {
    cfg.method = parse_method(j.at("method").get<std::string>());
  }

  const json schedules =
      j.contains("schedules") ? j.at("schedules") : json::object();
  cfg.lambda = parse_schedule(schedules, "lambda", cfg.lambda);
  cfg.alpha = parse_schedule(schedules, "alpha", cfg.alpha);
  cfg.r = parse_schedule(schedules, "r", cfg.r);
  cfg.k = parse_schedule(schedules, "k", cfg.k);
  if (schedules.contains("weights")) {
    const json& w = schedules.at("weights");
    cfg.weights.formula = get_or<std::string>(w, "formula", "uniform");
    cfg.weights.alpha0 = get_or<double>(w, "alpha0", 0.5);
  }

  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    cfg.a = get_or<double>(b, "a", cfg.a);
    cfg.b = get_or<double>(b, "b", cfg.b);
    cfg.d = get_or<double>(b, "d", cfg.d);
    cfg.alpha_cap = get_or<double>(b, "alpha_cap", cfg.alpha_cap);
    cfg.weight_floor = get_or<double>(b, "weight_floor", cfg.weight_floor);
  }
  if (j.contains("omega")) cfg.omega = j.at("omega").get<double>();

  cfg.x0 = get_array(j, "x0");
  cfg.tol = get_or<double>(j, "tol", cfg.tol);
  cfg.max_iter = get_or<int>(j, "max_iter", cfg.max_iter);
  cfg.workers = get_or<int>(j, "workers", cfg.workers);
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  cfg.trace_path = get_or<std::string>(j, "trace_path", "");
  cfg.quiet = get_or<bool>(j, "quiet", false);

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    cfg.solver.proj_tol = get_or<double>(s, "proj_tol", cfg.solver.proj_tol);
    cfg.solver.proj_max_inner =
        get_or<int>(s, "proj_max_inner", cfg.solver.proj_max_inner);
    cfg.solver.inner_tol = get_or<double>(s, "inner_tol",
                                          cfg.solver.inner_tol);
    cfg.solver.inner_max = get_or<int>(s, "inner_max", cfg.solver.inner_max);
    cfg.solver.force_iterative_resolvent = get_or<bool>(
        s, "force_iterative_resolvent", cfg.solver.force_iterative_resolvent);
    cfg.solver.force_dykstra_projection = get_or<bool>(
        s, "force_dykstra_projection", cfg.solver.force_dykstra_projection);
    cfg.solver.max_halfspaces = get_or<std::size_t>(
        s, "max_halfspaces", cfg.solver.max_halfspaces);
  }

  if (j.contains("bench")) {
    const json& b = j.at("bench");
    if (b.contains("workers")) {
      cfg.bench.workers = b.at("workers").get<std::vector<int>>();
    }
    cfg.bench.repetitions =
        get_or<int>(b, "repetitions", cfg.bench.repetitions);
  }

  if (cfg.max_iter < 1) throw InvalidParams("config: max_iter must be >= 1");
  if (cfg.workers < 1) throw InvalidParams("config: workers must be >= 1");
  if (!(cfg.tol >= 0.0)) throw InvalidParams("config: tol must be >= 0");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace parhyb
