#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weakhyp/pipeline.hpp"
#include "weakhyp/scenario.hpp"

using namespace weakhyp;

namespace {

struct GlobalOpts {
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 1e-8;
  int jobs = 1;
  std::string format = "csv";
};

PipelineOptions make_options(const GlobalOpts& g) {
  PipelineOptions opt;
  if (!g.out.empty()) {
    opt.out_dir = g.out;
  } else if (const char* env = std::getenv("WEAKHYP_OUT")) {
    opt.out_dir = env;
  }
  if (g.seed_set) opt.seed = g.seed;
  opt.tol = g.tol;
  opt.jobs = g.jobs;
  opt.format = g.format == "json" ? OutputFormat::json : OutputFormat::csv;
  return opt;
}

int run_stages(const std::string& scenario_name, PipelineOptions opt,
               std::vector<std::string> stages) {
  opt.stages = std::move(stages);
  try {
    Scenario sc = load_scenario(scenario_name);
    RunManifest m = run_pipeline(sc, opt);
    std::cout << "wrote " << m.files.size() << " files to " << opt.out_dir << " (config "
              << m.config_hash << ")\n";
    return 0;
  } catch (const StageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly hyperbolic system analysis pipeline"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "output directory (default $WEAKHYP_OUT or ./out)");
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for data phases and sampling");
  app.add_option("--tol", g.tol, "numerical tolerance")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str();
  app.add_option("--format", g.format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));

  std::string scenario_name;
  double s_val = 0.0, s0_val = 0.0, delta0_val = 0.0;
  bool traj = false;

  auto* cmd_reduce = app.add_subcommand("reduce", "block Sylvester reduction outputs");
  cmd_reduce->add_option("scenario", scenario_name)->required();

  auto* cmd_eigen = app.add_subcommand("eigen", "eigenvalue field and regularization outputs");
  cmd_eigen->add_option("scenario", scenario_name)->required();

  auto* cmd_energy = app.add_subcommand("energy-scan", "energy quantities and scaling fits");
  cmd_energy->add_option("scenario", scenario_name)->required();

  auto* cmd_solve = app.add_subcommand("solve", "per-frequency integration and energy check");
  cmd_solve->add_option("scenario", scenario_name)->required();
  auto* s_opt = cmd_solve->add_option("--s", s_val, "Gevrey order for the weight");
  cmd_solve->add_flag("--trajectories", traj, "also write the full trajectory table");

  auto* cmd_fit = app.add_subcommand("gevrey-fit", "decay fit of the final-time solution");
  cmd_fit->add_option("scenario", scenario_name)->required();
  auto* s0_opt = cmd_fit->add_option("--s0", s0_val, "data Gevrey order");
  auto* d0_opt = cmd_fit->add_option("--delta0", delta0_val, "data Gevrey radius");
  auto* s_opt_fit = cmd_fit->add_option("--s", s_val, "Gevrey order for the weight");

  std::vector<double> alphas;
  std::vector<int> ms;
  auto* cmd_thr = app.add_subcommand("thresholds", "threshold comparison table");
  cmd_thr->add_option("--alphas", alphas, "Holder exponents")->required();
  cmd_thr->add_option("--ms", ms, "system sizes")->required();

  auto* cmd_scen = app.add_subcommand("scenario", "scenario catalog");
  auto* cmd_scen_list = cmd_scen->add_subcommand("list", "list builtin scenarios");

  auto* cmd_pipe = app.add_subcommand("pipeline", "run every stage in order");
  cmd_pipe->add_option("scenario", scenario_name)->required();
  auto* s_opt_pipe = cmd_pipe->add_option("--s", s_val, "Gevrey order for the weight");
  cmd_pipe->add_flag("--trajectories", traj, "also write the full trajectory table");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->fallthrough();
    for (CLI::App* s2 : sub->get_subcommands([](CLI::App*) { return true; })) s2->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;
  PipelineOptions opt = make_options(g);
  opt.write_trajectories = traj;
  if (s_opt->count() || s_opt_fit->count() || s_opt_pipe->count()) opt.s = s_val;
  if (s0_opt->count()) opt.s0 = s0_val;
  if (d0_opt->count()) opt.delta0 = delta0_val;

  if (cmd_reduce->parsed()) return run_stages(scenario_name, opt, {"reduce"});
  if (cmd_eigen->parsed()) return run_stages(scenario_name, opt, {"eigen"});
  if (cmd_energy->parsed()) return run_stages(scenario_name, opt, {"reduce", "energy"});
  if (cmd_solve->parsed())
    return run_stages(scenario_name, opt, {"reduce", "energy", "solve"});
  if (cmd_fit->parsed())
    return run_stages(scenario_name, opt, {"reduce", "energy", "solve", "fit"});
  if (cmd_pipe->parsed()) return run_stages(scenario_name, opt, {});

  if (cmd_thr->parsed()) {
    try {
      Table t = threshold_table(alphas, ms);
      std::cout << (opt.format == OutputFormat::csv ? to_csv(t) : to_json(t));
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  if (cmd_scen->parsed()) {
    if (!cmd_scen_list->parsed()) {
      std::cerr << "error: expected 'scenario list'\n";
      return 1;
    }
    for (const auto& n : builtin_scenario_names()) std::cout << n << "\n";
    return 0;
  }
  return 1;
}
