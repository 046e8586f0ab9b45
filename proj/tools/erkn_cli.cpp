#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "erkn/experiment.hpp"
#include "erkn/tableau.hpp"

namespace {

struct Options {
  std::vector<std::string> methods;
  std::string problem;
  std::string config;
  std::string out_dir;
  std::vector<double> h;
  std::vector<double> t_end;
  std::optional<int> n;
  bool dx_two_over_n = false;
  std::optional<double> k, a, b, eps;
  bool no_timing = false;
  std::optional<double> stage_tol;
  std::optional<int> max_iters;
  std::vector<double> v_range, z_range;
  std::optional<int> nv, nz;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--method", o.methods,
                  "Method name, repeatable; groups: all, serkn, rkn")
      ->delimiter(',');
  sub->add_option("--problem", o.problem, "sine-gordon, duffing or stellar");
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--out-dir", o.out_dir, "Output directory");
  sub->add_option("--h", o.h, "Step sizes, strictly decreasing")->delimiter(',');
  sub->add_option("--t-end", o.t_end, "Final time or schedule")->delimiter(',');
  sub->add_option("--N", o.n, "sine-gordon lattice size");
  sub->add_flag("--dx-two-over-n", o.dx_two_over_n, "sine-gordon spacing 2/N instead of 1/N");
  sub->add_option("--k", o.k, "duffing parameter k");
  sub->add_option("--a", o.a, "stellar parameter a");
  sub->add_option("--b", o.b, "stellar parameter b");
  sub->add_option("--eps", o.eps, "stellar parameter eps");
  sub->add_flag("--no-timing", o.no_timing, "Write cpu_seconds as 0");
  sub->add_option("--stage-tol", o.stage_tol, "Fixed-point tolerance");
  sub->add_option("--max-iters", o.max_iters, "Fixed-point iteration cap");
  sub->add_option("--v-range", o.v_range, "Stability scan V range: lo hi")->expected(2);
  sub->add_option("--z-range", o.z_range, "Stability scan z range: lo hi")->expected(2);
  sub->add_option("--nv", o.nv, "Stability scan points in V");
  sub->add_option("--nz", o.nz, "Stability scan points in z");
}

erkn::ExperimentConfig build_config(erkn::ExperimentKind kind, const Options& o) {
  erkn::ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = erkn::load_config(o.config, kind);
  } else {
    cfg = erkn::default_config(kind, o.problem.empty() ? "duffing" : o.problem);
  }
  if (!o.problem.empty() && o.problem != cfg.problem) {
    cfg.problem = o.problem;
    cfg.problem_params.clear();
    if (cfg.h_source != "explicit") cfg.h = erkn::h_preset(cfg.problem, cfg.h_source);
  }
  if (!o.methods.empty()) cfg.methods = erkn::expand_methods(o.methods);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.h.empty()) {
    cfg.h = o.h;
    cfg.h_source = "explicit";
  }
  if (!o.t_end.empty()) cfg.t_end = o.t_end;
  if (o.n) cfg.problem_params["N"] = *o.n;
  if (o.dx_two_over_n) cfg.problem_params["dx_two_over_n"] = 1.0;
  if (o.k) cfg.problem_params["k"] = *o.k;
  if (o.a) cfg.problem_params["a"] = *o.a;
  if (o.b) cfg.problem_params["b"] = *o.b;
  if (o.eps) cfg.problem_params["eps"] = *o.eps;
  if (o.no_timing) cfg.timing = false;
  if (o.stage_tol) cfg.stage_tol = *o.stage_tol;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (o.v_range.size() == 2) {
    cfg.v_lo = o.v_range[0];
    cfg.v_hi = o.v_range[1];
  }
  if (o.z_range.size() == 2) {
    cfg.z_lo = o.z_range[0];
    cfg.z_hi = o.z_range[1];
  }
  if (o.nv) cfg.nv = *o.nv;
  if (o.nz) cfg.nz = *o.nz;
  cfg.validate();
  return cfg;
}

int list_methods() {
  std::cout << "name,stages,order,kind\n";
  for (const auto& name : erkn::method_names()) {
    const auto m = erkn::make_method(name);
    std::cout << name << ',' << m.stages << ',' << m.order << ','
              << (m.classical ? "rkn" : "erkn") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonal implicit symplectic ERKN integrators: experiments and checks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Options opts;
  std::map<CLI::App*, erkn::ExperimentKind> kinds;
  const std::vector<std::pair<const char*, erkn::ExperimentKind>> subs{
      {"verify", erkn::ExperimentKind::kVerify},
      {"converge", erkn::ExperimentKind::kConverge},
      {"efficiency", erkn::ExperimentKind::kEfficiency},
      {"energy", erkn::ExperimentKind::kEnergy},
      {"stability", erkn::ExperimentKind::kStability}};
  const std::map<std::string, std::string> help{
      {"verify", "Symplecticity residuals, map symplecticity and order-condition slopes"},
      {"converge", "Global error against a reference over an h schedule"},
      {"efficiency", "Global error and CPU time over the efficiency h schedule"},
      {"energy", "Maximum Hamiltonian error over a t_end schedule"},
      {"stability", "Stability/periodicity classification over a (V, z) grid"}};
  for (const auto& [name, kind] : subs) {
    auto* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, opts);
    kinds[sub] = kind;
  }
  auto* list = app.add_subcommand("list-methods", "Print the method registry");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) return list_methods();
  for (const auto& [sub, kind] : kinds) {
    if (!sub->parsed()) continue;
    erkn::ExperimentConfig cfg;
    try {
      cfg = build_config(kind, opts);
    } catch (const std::exception& e) {
      std::cerr << "erkn: " << e.what() << '\n';
      return 2;
    }
    try {
      const auto result = erkn::run_experiment(cfg);
      for (const auto& f : result.files) std::cout << f.string() << '\n';
      for (const auto& r : result.verify)
        if (r.pass == "false")
          std::cerr << "FAIL " << r.method << ' ' << r.check_id << " value " << r.value
                    << " threshold " << r.threshold << '\n';
      for (const auto& r : result.converge)
        if (r.status != "ok") std::cerr << "row " << r.method << " h=" << r.h << ": " << r.status << '\n';
      for (const auto& r : result.energy)
        if (r.status != "ok")
          std::cerr << "row " << r.method << " t_end=" << r.t_end << ": " << r.status << '\n';
      return result.verify_failed ? 1 : 0;
    } catch (const std::exception& e) {
      std::cerr << "erkn: " << e.what() << '\n';
      return 3;
    }
  }
  return 2;
}
