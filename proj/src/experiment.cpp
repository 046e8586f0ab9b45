#include "erkn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "erkn/format.hpp"
#include "erkn/stability.hpp"
#include "erkn/verification.hpp"

#ifndef ERKN_VERSION
#define ERKN_VERSION "0.0.0"
#endif

namespace erkn {

namespace {

using nlohmann::json;

constexpr const char* kReferenceMethod = "SERKN3s4(1)";
constexpr int kReferenceRefinement = 20;

std::vector<double> harmonic(double base, int lo, int hi) {
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(1.0 / (base * i));
  return out;
}

std::vector<double> geometric(double base, int lo, int hi) {
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(1.0 / (base * std::ldexp(1.0, i)));
  return out;
}

std::vector<double> decades(int lo, int hi) {
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(std::pow(10.0, i));
  return out;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string file_stem(const std::string& method) {
  std::string out;
  for (char ch : method) {
    if (ch == '(') out += '_';
    else if (ch != ')') out += ch;
  }
  return out;
}

double cpu_now() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: key '") + key + "' has the wrong type");
  }
}

std::vector<double> number_list(const json& j, const char* key) {
  if (j.is_number()) return {j.get<double>()};
  return get_as<std::vector<double>>(j, key);
}

std::vector<double> parse_h(const json& j, const std::string& problem, std::string& source) {
  if (j.is_string()) {
    source = j.get<std::string>();
    return h_preset(problem, source);
  }
  if (j.is_object()) {
    static const std::vector<std::string> allowed{"kind", "base", "i"};
    for (const auto& [k, v] : j.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        throw ConfigError("config: unknown key 'h." + k + "'");
    if (!j.contains("kind") || !j.contains("base") || !j.contains("i"))
      throw ConfigError("config: 'h' generator needs keys kind, base, i");
    const auto kind = get_as<std::string>(j["kind"], "h.kind");
    const auto base = get_as<double>(j["base"], "h.base");
    const auto range = get_as<std::vector<int>>(j["i"], "h.i");
    if (range.size() != 2 || range[0] > range[1] || !(base > 0.0))
      throw ConfigError("config: 'h' generator needs base > 0 and i = [lo, hi] with lo <= hi");
    source = kind + ":" + fmt17(base);
    if (kind == "harmonic") return harmonic(base, range[0], range[1]);
    if (kind == "geometric") return geometric(base, range[0], range[1]);
    throw ConfigError("config: 'h.kind' must be 'harmonic' or 'geometric'");
  }
  source = "explicit";
  return number_list(j, "h");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

struct GeSampling {
  double interval = 0.0;  // 0: final time only
  std::vector<int> strides;
};

GeSampling sampling_for(const ExperimentConfig& cfg, double t0) {
  GeSampling s;
  const double h_max = cfg.h.front();
  bool integral = true;
  for (double h : cfg.h) {
    const double r = h_max / h;
    if (std::abs(r - std::round(r)) > 1e-9 * r) integral = false;
  }
  const double span = cfg.t_end.front() - t0;
  const double nsamples = span / h_max;
  if (std::abs(nsamples - std::round(nsamples)) > 1e-9 * nsamples) integral = false;
  if (integral) {
    s.interval = h_max;
    for (double h : cfg.h) s.strides.push_back(static_cast<int>(std::lround(h_max / h)));
  } else {
    for (double h : cfg.h) {
      const auto n = std::max<std::int64_t>(1, step_count(t0, cfg.t_end.front(), h));
      s.strides.push_back(static_cast<int>(std::min<std::int64_t>(n, std::numeric_limits<int>::max())));
    }
  }
  return s;
}

double max_q_error(const State& a, const State& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.q.size(); ++i) e = std::max(e, std::abs(a.q[i] - b.q[i]));
  return e;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kConverge: return "converge";
    case ExperimentKind::kEfficiency: return "efficiency";
    case ExperimentKind::kEnergy: return "energy";
    case ExperimentKind::kStability: return "stability";
    case ExperimentKind::kVerify: return "verify";
  }
  return "converge";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::kConverge, ExperimentKind::kEfficiency, ExperimentKind::kEnergy,
                 ExperimentKind::kStability, ExperimentKind::kVerify})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown experiment kind '" + std::string(s) +
                    "' (converge, efficiency, energy, stability, verify)");
}

std::vector<double> h_preset(std::string_view problem, std::string_view preset) {
  const bool converge = preset == "converge" || (problem == "sine-gordon" && preset == "error");
  const bool efficiency = preset == "efficiency" || (problem == "sine-gordon" && preset == "cpu");
  if (problem == "sine-gordon") {
    if (converge) return geometric(20.0, 1, 4);
    if (efficiency) return geometric(100.0, 1, 4);
    if (preset == "energy") return {1.0 / 40};
  } else if (problem == "duffing") {
    if (converge) return harmonic(200.0, 1, 4);
    if (efficiency) return harmonic(40.0, 1, 4);
    if (preset == "energy") return {1.0 / 50};
  } else if (problem == "stellar") {
    if (converge) return harmonic(8.0, 1, 4);
    if (efficiency) return harmonic(40.0, 1, 4);
    if (preset == "energy") return {1.0 / 10};
  } else {
    throw ConfigError("unknown problem '" + std::string(problem) + "'");
  }
  throw ConfigError("unknown h preset '" + std::string(preset) + "' for " + std::string(problem));
}

ExperimentConfig default_config(ExperimentKind kind, std::string_view problem) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.problem = std::string(problem);
  cfg.methods = kind == ExperimentKind::kVerify || kind == ExperimentKind::kStability
                    ? method_names()
                    : serkn_method_names();
  switch (kind) {
    case ExperimentKind::kConverge:
    case ExperimentKind::kEfficiency:
      cfg.h_source = kind == ExperimentKind::kConverge ? "converge" : "efficiency";
      cfg.h = h_preset(problem, cfg.h_source);
      cfg.t_end = {10.0};
      break;
    case ExperimentKind::kEnergy:
      cfg.h_source = "energy";
      cfg.h = h_preset(problem, cfg.h_source);
      cfg.t_end = decades(0, 3);
      break;
    case ExperimentKind::kStability:
    case ExperimentKind::kVerify:
      cfg.h_source = "explicit";
      cfg.h = {1.0 / 20};
      cfg.t_end = {10.0};
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("config: 'methods' must not be empty");
  for (const auto& m : methods)
    if (!is_known_method(m)) throw ConfigError("config: unknown method '" + m + "'");
  try {
    (void)make_problem(problem, problem_params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (h.empty()) throw ConfigError("config: 'h' must not be empty");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i])) throw ConfigError("config: every h must be > 0");
    if (i > 0 && !(h[i] < h[i - 1])) throw ConfigError("config: h schedule must be strictly decreasing");
  }
  if (t_end.empty()) throw ConfigError("config: 't_end' must not be empty");
  for (std::size_t i = 0; i < t_end.size(); ++i) {
    if (!(t_end[i] > 0.0) || !std::isfinite(t_end[i]))
      throw ConfigError("config: every t_end must be > 0");
    if (i > 0 && !(t_end[i] > t_end[i - 1]))
      throw ConfigError("config: t_end schedule must be strictly increasing");
  }
  if (kind == ExperimentKind::kEnergy && h.size() != 1)
    throw ConfigError("config: energy runs take a single h");
  if ((kind == ExperimentKind::kConverge || kind == ExperimentKind::kEfficiency) && t_end.size() != 1)
    throw ConfigError("config: converge/efficiency runs take a single t_end");
  if (!(stage_tol > 0.0 && stage_tol < 1e-8)) throw ConfigError("config: stage_tol must be in (0, 1e-8)");
  if (max_iters < 1) throw ConfigError("config: max_iters must be >= 1");
  if (!(v_lo > 0.0 && v_hi > v_lo)) throw ConfigError("config: V_range needs 0 < lo < hi");
  if (!(z_hi > z_lo)) throw ConfigError("config: z_range needs lo < hi");
  if (nv < 2 || nz < 2) throw ConfigError("config: nV and nz must be >= 2");
  if (decay_h.size() < 4) throw ConfigError("config: decay_h needs at least 4 values");
  for (std::size_t i = 1; i < decay_h.size(); ++i)
    if (!(decay_h[i] < decay_h[i - 1])) throw ConfigError("config: decay_h must be strictly decreasing");
  for (double v : v_samples)
    if (!(v >= 0.0)) throw ConfigError("config: v_samples must be >= 0");
  if (!(omega > 0.0)) throw ConfigError("config: omega must be > 0");
}

std::vector<std::string> expand_methods(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  auto add = [&out](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& m : method_names()) add(m);
    } else if (n == "serkn") {
      for (const auto& m : serkn_method_names()) add(m);
    } else if (n == "rkn") {
      for (const auto& m : method_names())
        if (m.rfind("RKN", 0) == 0) add(m);
    } else {
      add(n);
    }
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
    throw ConfigError("config: empty document; required keys: methods, problem");
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse error at line " + std::to_string(line_of(text, e.byte)) +
                      ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  std::vector<std::string> missing;
  for (const char* key : {"methods", "problem"})
    if (!doc.contains(key)) missing.emplace_back(key);
  if (!missing.empty()) {
    std::string msg = "config: missing required keys:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(msg);
  }
  static const std::vector<std::string> known{
      "experiment", "methods", "problem",  "problem_params", "h",     "t_end",
      "out_dir",    "stage_tol", "max_iters", "timing",       "V_range", "z_range",
      "nV",         "nz",        "v_samples", "omega",        "decay_h"};
  for (const auto& [k, v] : doc.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("config: unknown key '" + k + "'");

  ExperimentKind k = ExperimentKind::kConverge;
  if (kind) k = *kind;
  else if (doc.contains("experiment")) k = parse_experiment_kind(get_as<std::string>(doc["experiment"], "experiment"));

  const auto problem = get_as<std::string>(doc["problem"], "problem");
  const auto names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw ConfigError("config: unknown problem '" + problem + "'");
  ExperimentConfig cfg = default_config(k, problem);

  if (doc["methods"].is_string()) cfg.methods = expand_methods({doc["methods"].get<std::string>()});
  else cfg.methods = expand_methods(get_as<std::vector<std::string>>(doc["methods"], "methods"));
  if (doc.contains("problem_params"))
    cfg.problem_params = get_as<std::map<std::string, double>>(doc["problem_params"], "problem_params");
  if (doc.contains("h")) cfg.h = parse_h(doc["h"], problem, cfg.h_source);
  if (doc.contains("t_end")) cfg.t_end = number_list(doc["t_end"], "t_end");
  if (doc.contains("out_dir")) cfg.out_dir = get_as<std::string>(doc["out_dir"], "out_dir");
  if (doc.contains("stage_tol")) cfg.stage_tol = get_as<double>(doc["stage_tol"], "stage_tol");
  if (doc.contains("max_iters")) cfg.max_iters = get_as<int>(doc["max_iters"], "max_iters");
  if (doc.contains("timing")) cfg.timing = get_as<bool>(doc["timing"], "timing");
  auto range = [&doc](const char* key, double& lo, double& hi) {
    if (!doc.contains(key)) return;
    const auto r = get_as<std::vector<double>>(doc[key], key);
    if (r.size() != 2) throw ConfigError(std::string("config: '") + key + "' must be [lo, hi]");
    lo = r[0];
    hi = r[1];
  };
  range("V_range", cfg.v_lo, cfg.v_hi);
  range("z_range", cfg.z_lo, cfg.z_hi);
  if (doc.contains("nV")) cfg.nv = get_as<int>(doc["nV"], "nV");
  if (doc.contains("nz")) cfg.nz = get_as<int>(doc["nz"], "nz");
  if (doc.contains("v_samples")) cfg.v_samples = number_list(doc["v_samples"], "v_samples");
  if (doc.contains("omega")) cfg.omega = get_as<double>(doc["omega"], "omega");
  if (doc.contains("decay_h")) cfg.decay_h = number_list(doc["decay_h"], "decay_h");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  return parse_config(text, kind);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = to_string(cfg.kind);
  j["methods"] = cfg.methods;
  j["problem"] = cfg.problem;
  j["problem_params"] = cfg.problem_params;
  j["h"] = cfg.h;
  j["h_source"] = cfg.h_source;
  j["t_end"] = cfg.t_end;
  j["out_dir"] = cfg.out_dir.string();
  j["stage_tol"] = cfg.stage_tol;
  j["max_iters"] = cfg.max_iters;
  j["timing"] = cfg.timing;
  j["V_range"] = {cfg.v_lo, cfg.v_hi};
  j["z_range"] = {cfg.z_lo, cfg.z_hi};
  j["nV"] = cfg.nv;
  j["nz"] = cfg.nz;
  j["v_samples"] = cfg.v_samples;
  j["omega"] = cfg.omega;
  j["decay_h"] = cfg.decay_h;
  return j.dump(2);
}

std::vector<ConvergeRow> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg.problem, cfg.problem_params);
  const double t_end = cfg.t_end.front();
  const GeSampling sampling = sampling_for(cfg, prob.initial.t);

  Trajectory ref;
  if (!prob.reference) {
    SolveSettings rs;
    rs.h = cfg.h.back() / kReferenceRefinement;
    rs.t_end = t_end;
    rs.stage_tol = cfg.stage_tol;
    rs.max_iters = std::max(cfg.max_iters, SolveSettings{}.max_iters);
    rs.record_stride = sampling.interval > 0.0 ? sampling.strides.back() * kReferenceRefinement
                                               : static_cast<int>(std::min<std::int64_t>(
                                                     step_count(prob.initial.t, t_end, rs.h),
                                                     std::numeric_limits<int>::max()));
    ref = integrate(make_method(kReferenceMethod), prob, prob.initial, rs);
    if (!ref.ok()) throw std::runtime_error("reference run failed: " + ref.error);
  }

  std::vector<ConvergeRow> rows;
  for (const auto& name : cfg.methods) {
    const MethodTableau method = make_method(name);
    for (std::size_t i = 0; i < cfg.h.size(); ++i) {
      ConvergeRow row;
      row.method = name;
      row.h = cfg.h[i];
      SolveSettings s;
      s.h = cfg.h[i];
      s.t_end = t_end;
      s.stage_tol = cfg.stage_tol;
      s.max_iters = cfg.max_iters;
      s.record_stride = std::max(1, sampling.strides[i]);
      const double c0 = cpu_now();
      const Trajectory tr = integrate(method, prob, prob.initial, s);
      const double c1 = cpu_now();
      row.nfev = tr.nfev;
      row.cpu_seconds = cfg.timing ? c1 - c0 : 0.0;
      if (!tr.ok()) {
        row.ge = std::numeric_limits<double>::quiet_NaN();
        row.status = sanitize((tr.guard_tripped ? "guard: " : "error: ") + tr.error);
        rows.push_back(row);
        continue;
      }
      double ge = 0.0;
      if (prob.reference) {
        for (const auto& st : tr.states) ge = std::max(ge, max_q_error(st, prob.reference(st.t)));
      } else {
        if (tr.states.size() != ref.states.size()) throw std::logic_error("sample grids differ");
        for (std::size_t j = 0; j < tr.states.size(); ++j) {
          if (std::abs(tr.states[j].t - ref.states[j].t) > 1e-9 * std::max(1.0, t_end))
            throw std::logic_error("sample times differ");
          ge = std::max(ge, max_q_error(tr.states[j], ref.states[j]));
        }
      }
      row.ge = ge;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<EnergyRow> run_energy(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg.problem, cfg.problem_params);
  std::vector<EnergyRow> rows;
  for (const auto& name : cfg.methods) {
    const MethodTableau method = make_method(name);
    for (double t_end : cfg.t_end) {
      EnergyRow row;
      row.method = name;
      row.t_end = t_end;
      SolveSettings s;
      s.h = cfg.h.front();
      s.t_end = t_end;
      s.stage_tol = cfg.stage_tol;
      s.max_iters = cfg.max_iters;
      s.record_stride = static_cast<int>(std::clamp<std::int64_t>(
          step_count(prob.initial.t, t_end, s.h), 1, std::numeric_limits<int>::max()));
      const Trajectory tr = integrate(method, prob, prob.initial, s);
      row.geh = tr.ok() ? tr.geh : std::numeric_limits<double>::quiet_NaN();
      if (!tr.ok()) row.status = sanitize((tr.guard_tripped ? "guard: " : "error: ") + tr.error);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<VerifyRow> run_verify(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg.problem, cfg.problem_params);
  std::vector<VerifyRow> rows;
  auto flag = [](bool ok) { return std::string(ok ? "true" : "false"); };
  for (const auto& name : cfg.methods) {
    const MethodTableau m = make_method(name);
    for (double v : cfg.v_samples) {
      VerifyRow row{name, "symplectic:v=" + fmt17(v), 0.0, 1e-12, ""};
      try {
        for (double r : symplectic_residuals(m, v)) row.value = std::max(row.value, r);
        if (!std::isfinite(row.value)) row.value = std::numeric_limits<double>::quiet_NaN();
      } catch (const std::exception&) {
        row.value = std::numeric_limits<double>::quiet_NaN();
      }
      row.pass = flag(row.value < row.threshold);
      rows.push_back(row);
    }
    {
      VerifyRow row{name, "jacobian:" + cfg.problem + ":h=" + fmt17(cfg.h.front()), 0.0, 1e-6, ""};
      try {
        row.value = jacobian_symplecticity(m, prob, prob.initial, cfg.h.front());
      } catch (const std::exception&) {
        row.value = std::numeric_limits<double>::quiet_NaN();
      }
      row.pass = flag(row.value <= row.threshold);
      rows.push_back(row);
    }
    if (m.classical) continue;
    for (const auto& c : order_conditions(order_condition_set_for(m))) {
      VerifyRow row{name, "order:" + c.id(), 0.0, c.remainder_order - 0.1, ""};
      try {
        row.value = order_residual_decay(m, c, cfg.omega, cfg.decay_h);
      } catch (const std::exception&) {
        row.value = std::numeric_limits<double>::quiet_NaN();
      }
      row.pass = c.informational ? "n/a" : flag(row.value >= row.threshold);
      rows.push_back(row);
    }
  }
  return rows;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const std::time_t started = std::time(nullptr);
  std::filesystem::create_directories(cfg.out_dir);
  RunResult result;
  auto emit = [&](const std::string& file, const std::string& text) {
    const auto path = cfg.out_dir / file;
    write_text(path, text);
    result.files.push_back(path);
  };

  switch (cfg.kind) {
    case ExperimentKind::kConverge:
    case ExperimentKind::kEfficiency: {
      result.converge = run_convergence(cfg);
      std::ostringstream os;
      os << "method,h,nfev,GE,cpu_seconds,status\n";
      for (const auto& r : result.converge)
        os << r.method << ',' << fmt17(r.h) << ',' << r.nfev << ',' << fmt17(r.ge) << ','
           << fmt17(r.cpu_seconds) << ',' << r.status << '\n';
      emit(to_string(cfg.kind) + ".csv", os.str());
      break;
    }
    case ExperimentKind::kEnergy: {
      result.energy = run_energy(cfg);
      std::ostringstream os;
      os << "method,t_end,GEH,status\n";
      for (const auto& r : result.energy)
        os << r.method << ',' << fmt17(r.t_end) << ',' << fmt17(r.geh) << ',' << r.status << '\n';
      emit("energy.csv", os.str());
      break;
    }
    case ExperimentKind::kStability: {
      for (const auto& name : cfg.methods) {
        const auto grid = scan_region(make_method(name), cfg.v_lo, cfg.v_hi, cfg.z_lo, cfg.z_hi,
                                      cfg.nv, cfg.nz);
        std::ostringstream os;
        write_stability_csv(os, grid);
        emit("stability_" + file_stem(name) + ".csv", os.str());
      }
      break;
    }
    case ExperimentKind::kVerify: {
      result.verify = run_verify(cfg);
      std::ostringstream os;
      os << "method,check_id,value,threshold,pass\n";
      for (const auto& r : result.verify) {
        os << r.method << ',' << r.check_id << ',' << fmt17(r.value) << ',' << fmt17(r.threshold)
           << ',' << r.pass << '\n';
        if (r.pass == "false") result.verify_failed = true;
      }
      emit("verify.csv", os.str());
      break;
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  json manifest;
  manifest["tool"] = "erkn";
  manifest["version"] = ERKN_VERSION;
  manifest["compiler"] = __VERSION__;
  manifest["cplusplus"] = static_cast<long>(__cplusplus);
  manifest["json_library"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  manifest["config"] = json::parse(config_to_json(cfg));
  if (cfg.kind == ExperimentKind::kConverge || cfg.kind == ExperimentKind::kEfficiency) {
    const Problem prob = make_problem(cfg.problem, cfg.problem_params);
    manifest["reference"] =
        prob.reference ? std::string("closed form")
                       : std::string(kReferenceMethod) + " at h = " +
                             fmt17(cfg.h.back() / kReferenceRefinement);
  }
  manifest["problem_parameters"] = make_problem(cfg.problem, cfg.problem_params).parameters;
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
  manifest["started_utc"] = stamp;
  manifest["wall_seconds"] = wall;
  json files = json::array();
  for (const auto& f : result.files) files.push_back(f.filename().string());
  manifest["outputs"] = files;
  manifest["verify_failed"] = result.verify_failed;
  const auto path = cfg.out_dir / "run.json";
  write_text(path, manifest.dump(2) + "\n");
  result.files.push_back(path);
  return result;
}

}  // namespace erkn
