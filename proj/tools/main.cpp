#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "fermilt/checkpoint.hpp"
#include "fermilt/errors.hpp"
#include "fermilt/experiments.hpp"
#include "fermilt/resultdoc.hpp"

namespace {

using namespace fermilt;
using Clock = std::chrono::steady_clock;

struct CommonOpts {
  int n = 32;
  double L = 32.0;
  double m = 1.0;
  std::uint64_t seed = 0;
  int max_iters = 4000;
  double grad_tol = 1e-6;
  std::string out_root;
  std::string config_path;
};

std::string default_out_root() {
  const char* env = std::getenv("FERMILT_OUT");
  return env != nullptr ? env : "runs";
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--n", c.n, "grid points per axis (even, >= 8)");
  cmd->add_option("--L", c.L, "box side length");
  cmd->add_option("--m", c.m, "particle mass");
  cmd->add_option("--seed", c.seed, "base RNG seed");
  cmd->add_option("--max-iters", c.max_iters, "descent iteration cap");
  cmd->add_option("--grad-tol", c.grad_tol, "relative gradient tolerance");
  cmd->add_option("--out", c.out_root, "output root directory")
      ->default_val(default_out_root());
  cmd->add_option("--config", c.config_path,
                  "flat key=value manifest; flags win")
      ->check(CLI::ExistingFile);
}

// Flat key=value manifest applied to any option not already set on the
// command line.  (CLI11 only processes set_config on the top-level app, so
// subcommand manifests are routed through the option API by hand.)
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  CLI::ConfigINI ini;
  const std::vector<CLI::ConfigItem> items = ini.from_file(path);
  for (const auto& item : items) {
    CLI::Option* op = item.parents.empty()
                          ? cmd->get_option_no_throw("--" + item.name)
                          : nullptr;
    if (op == nullptr || op->get_name() == "--config") {
      throw CLI::ConfigError("unknown key in config file: " + item.fullname());
    }
    if (op->count() > 0) continue;  // explicit flags win
    for (const auto& input : item.inputs) op->add_result(input);
    op->run_callback();
  }
}

MinimizeConfig solver_config(const CommonOpts& c) {
  MinimizeConfig cfg;
  cfg.max_iters = c.max_iters;
  cfg.grad_tol = c.grad_tol;
  cfg.seed = c.seed;
  return cfg;
}

json common_inputs(const CommonOpts& c) {
  return json{{"n", c.n},         {"L", c.L},
              {"m", c.m},         {"seed", c.seed},
              {"max_iters", c.max_iters}, {"grad_tol", c.grad_tol}};
}

int finish_run(const CommonOpts& c, const std::string& kind, json inputs,
               const json& outputs, Clock::time_point t0, bool converged) {
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const std::string dir = allocate_run_dir(c.out_root, kind);
  write_json_file(dir + "/config.json", inputs);
  write_json_file(dir + "/result.json",
                  make_result_document(kind, inputs, outputs, secs));
  std::cout << "wrote " << dir << "/result.json\n";
  return converged ? 0 : 2;
}

int cmd_constant(const CommonOpts& c, int N, int starts, bool refine) {
  if (N < 1 || N > 3) {
    std::cerr << "N must be 1..3\n";
    return 1;
  }
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  EstimateDResult res =
      estimate_D(N, grid, solver_config(c), starts, refine);
  std::cout << "D_hat(" << N << ") = " << res.value
            << "  spread = " << res.spread
            << "  doubling_delta = " << res.grid_doubling_delta << "\n";

  json inputs = common_inputs(c);
  inputs["N"] = N;
  inputs["starts"] = starts;
  inputs["refine"] = refine;
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const std::string dir = allocate_run_dir(c.out_root, "constant");
  write_json_file(dir + "/config.json", inputs);
  write_json_file(dir + "/result.json",
                  make_result_document("constant", inputs, to_json(res), secs));
  write_checkpoint(dir + "/optimizer.fvf", res.optimizer);
  std::cout << "wrote " << dir << "/result.json\n";
  return res.converged ? 0 : 2;
}

int cmd_minimize(const CommonOpts& c, int N, double a) {
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  MinimizeReport rep = minimize_energy(perturbed_init(grid, N, c.seed), a,
                                       c.m, solver_config(c));
  const EnergyBreakdown e = energy(rep.final_set, a, c.m);
  std::cout << "E_" << a << "(" << N << ") = " << e.total
            << "  grad = " << rep.projected_grad_norm << "\n";

  json inputs = common_inputs(c);
  inputs["N"] = N;
  inputs["a"] = a;
  json outputs = to_json(rep);
  outputs["energy"] = to_json(e);
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  const std::string dir = allocate_run_dir(c.out_root, "minimize");
  write_json_file(dir + "/config.json", inputs);
  write_json_file(dir + "/result.json",
                  make_result_document("minimize", inputs, outputs, secs));
  write_checkpoint(dir + "/state.fvf", rep.final_set);
  std::cout << "wrote " << dir << "/result.json\n";
  return rep.converged ? 0 : 2;
}

int cmd_sweep(const CommonOpts& c, std::vector<double> ratios, double D2) {
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  const std::string dir = allocate_run_dir(c.out_root, "sweep");
  SweepConfig scfg;
  scfg.solver = solver_config(c);
  scfg.csv_path = dir + "/sweep.csv";
  std::vector<SweepRecord> records = sweep_a(ratios, c.m, D2, grid, scfg);

  json inputs = common_inputs(c);
  inputs["ratios"] = ratios;
  inputs["D2"] = D2;
  json rows = json::array();
  bool all_converged = true;
  for (const auto& r : records) {
    rows.push_back(to_json(r));
    all_converged = all_converged && r.converged;
    std::cout << "a = " << r.a << "  E = " << r.E << "  eps = " << r.eps
              << (r.converged ? "" : "  [not converged]") << "\n";
  }
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  write_json_file(dir + "/config.json", inputs);
  write_json_file(dir + "/result.json",
                  make_result_document("sweep", inputs,
                                       json{{"records", rows}}, secs));
  std::cout << "wrote " << dir << "/sweep.csv\n";
  return all_converged ? 0 : 2;
}

int cmd_binding(const CommonOpts& c, double a) {
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  BindingResult res = binding_check(a, c.m, grid, solver_config(c));
  std::cout << "E(2) = " << res.E2 << "  2 E(1) = " << 2.0 * res.E1
            << "  margin = " << res.margin
            << "  strict = " << (res.strict ? "true" : "false") << "\n";
  json inputs = common_inputs(c);
  inputs["a"] = a;
  return finish_run(c, "binding", inputs, to_json(res), t0, res.converged);
}

int cmd_collapse(const CommonOpts& c, double a, int N, int steps,
                 const std::string& init_path) {
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  OrbitalSet base;
  if (!init_path.empty()) {
    base = read_checkpoint(init_path);
  } else {
    MinimizeConfig qcfg = solver_config(c);
    base = minimize_quotient(perturbed_init(grid, N, c.seed), qcfg).final_set;
  }
  CollapseResult res = collapse_probe(a, c.m, base, steps);
  for (const auto& row : res.rows) {
    std::cout << "t = " << row.t << "  E = " << row.energy << "\n";
  }
  std::cout << "slope = " << res.slope
            << "  predicted = " << res.predicted_slope << "\n";
  json inputs = common_inputs(c);
  inputs["a"] = a;
  inputs["N"] = N;
  inputs["steps"] = steps;
  if (!init_path.empty()) inputs["init"] = init_path;
  return finish_run(c, "collapse", inputs, to_json(res), t0, true);
}

int cmd_dstar(const CommonOpts& c, int starts) {
  const auto t0 = Clock::now();
  const GridPtr grid = SpectralGrid::make(c.n, c.L);
  MinimizeConfig cfg = solver_config(c);
  std::vector<OrbitalSet> candidates;
  bool all_converged = true;
  for (int s = 0; s < starts; ++s) {
    MinimizeConfig run = cfg;
    run.seed = cfg.seed + static_cast<std::uint64_t>(s);
    MinimizeReport rep =
        minimize_quotient(perturbed_init(grid, 2, run.seed), run);
    all_converged = all_converged && rep.converged;
    candidates.push_back(rep.final_set);
  }
  DstarResult res = estimate_dstar(candidates);
  std::cout << "d_star = " << res.value << "  dc_bias = " << res.dc_bias
            << "\n";
  json inputs = common_inputs(c);
  inputs["starts"] = starts;
  return finish_run(c, "dstar", inputs, to_json(res), t0, all_converged);
}

int cmd_tail(const CommonOpts& c, const std::string& checkpoint, int orbital,
             double r_lo, double r_hi, const std::string& model) {
  const auto t0 = Clock::now();
  OrbitalSet set = read_checkpoint(checkpoint);
  if (orbital < 0 || orbital >= set.count()) {
    std::cerr << "orbital index out of range for checkpoint\n";
    return 1;
  }
  const TailModel tm =
      model == "exponential" ? TailModel::exponential : TailModel::algebraic;
  TailFit res = tail_fit(set.orbitals[orbital], density_centroid(set), r_lo,
                         r_hi, tm);
  std::cout << "tail slope = " << res.slope << "  r2 = " << res.r_squared
            << "  points = " << res.points_used << "\n";
  json inputs = common_inputs(c);
  inputs["checkpoint"] = checkpoint;
  inputs["orbital"] = orbital;
  inputs["r_lo"] = r_lo;
  inputs["r_hi"] = r_hi;
  inputs["model"] = model;
  return finish_run(c, "tail", inputs, to_json(res), t0, true);
}

int cmd_fit(const CommonOpts& c, const std::string& csv,
            const std::string& target, double D2, double exclude_below) {
  const auto t0 = Clock::now();
  std::vector<SweepCsvRow> rows = read_sweep_csv(csv);
  // Default the threshold to the one the sweep itself calibrated and wrote
  // into the D_minus_a column; an explicit --D2 overrides it.
  if (D2 <= 0.0 && !rows.empty()) D2 = rows.front().a + rows.front().D_minus_a;
  std::vector<SweepRecord> records;
  for (const auto& row : rows) {
    SweepRecord r;
    r.a = row.a;
    r.E = row.E;
    r.eps = row.eps;
    r.mu1 = row.mu1;
    r.mu2 = row.mu2;
    r.converged = row.converged;
    records.push_back(r);
  }
  const FitTarget ft =
      target == "energy_law" ? FitTarget::energy_law : FitTarget::eps_law;
  ScalingFit res = fit_scaling(records, ft, D2, c.m, exclude_below);
  std::cout << "exponent = " << res.exponent
            << "  prefactor = " << res.prefactor << "  r2 = " << res.r_squared;
  if (ft == FitTarget::energy_law) std::cout << "  d_implied = " << res.d_implied;
  std::cout << "\n";
  json inputs = common_inputs(c);
  inputs["csv"] = csv;
  inputs["target"] = target;
  inputs["D2"] = D2;
  inputs["exclude_below"] = exclude_below;
  return finish_run(c, "fit", inputs, to_json(res), t0, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral solver for the critical relativistic Fermi system"};
  app.require_subcommand(1);

  CommonOpts c;

  int N = 2, starts = 3, steps = 4, orbital = 0;
  bool no_refine = false;
  double a = 0.0, ratio = -1.0, D2 = 0.0;
  double r_lo = 0.0, r_hi = 0.0, exclude_below = 0.0;
  std::vector<double> ratios;
  std::string init_path, checkpoint, model = "algebraic", target = "eps_law";
  std::string csv;

  auto* constant = app.add_subcommand(
      "constant", "estimate the dual Lieb-Thirring constant D_{4/3,N}");
  add_common(constant, c);
  constant->add_option("--N", N, "orbital count (1..3)");
  constant->add_option("--starts", starts, "multi-start seeds");
  constant->add_flag("--no-refine", no_refine, "skip the doubled-grid polish");

  auto* minimize =
      app.add_subcommand("minimize", "ground state of E_a(N) at fixed a");
  add_common(minimize, c);
  minimize->add_option("--N", N, "orbital count");
  minimize->add_option("--a", a, "coupling strength")->required();

  auto* sweep = app.add_subcommand(
      "sweep", "ground-state sweep a = ratio * D2 toward the threshold");
  add_common(sweep, c);
  sweep->add_option("--ratios", ratios, "a/D2 ratios")
      ->required()
      ->delimiter(',');
  sweep->add_option("--D2", D2, "threshold constant D_{4/3,2}")->required();

  auto* binding =
      app.add_subcommand("binding", "check E_a(2) < 2 E_a(1) strictly");
  add_common(binding, c);
  binding->add_option("--a", a, "coupling strength");
  binding->add_option("--ratio", ratio, "a as a fraction of D2 (needs --D2)");
  binding->add_option("--D2", D2, "threshold constant D_{4/3,2}");

  auto* collapse = app.add_subcommand(
      "collapse", "energy of the dilated trial family above threshold");
  add_common(collapse, c);
  collapse->add_option("--a", a, "coupling strength");
  collapse->add_option("--ratio", ratio, "a as a fraction of D2 (needs --D2)");
  collapse->add_option("--D2", D2, "threshold constant D_{4/3,2}");
  collapse->add_option("--N", N, "orbital count");
  collapse->add_option("--steps", steps, "dyadic dilation rungs");
  collapse->add_option("--init", init_path, "base profile checkpoint");

  auto* dstar = app.add_subcommand(
      "dstar", "auxiliary constant d_* over quotient optimizers");
  add_common(dstar, c);
  dstar->add_option("--starts", starts, "multi-start seeds");

  auto* tail =
      app.add_subcommand("tail", "radial decay fit of an orbital profile");
  add_common(tail, c);
  tail->add_option("--checkpoint", checkpoint, "orbital checkpoint path")
      ->required();
  tail->add_option("--orbital", orbital, "orbital index");
  tail->add_option("--r-lo", r_lo, "fit window lower radius")->required();
  tail->add_option("--r-hi", r_hi, "fit window upper radius")->required();
  tail->add_option("--model", model, "algebraic or exponential");

  auto* fit =
      app.add_subcommand("fit", "scaling-law fit over a recorded sweep");
  add_common(fit, c);
  fit->add_option("--csv", csv, "sweep CSV path")->required();
  fit->add_option("--target", target, "eps_law or energy_law");
  fit->add_option("--D2", D2,
                  "threshold constant (default: from the CSV gap column)");
  fit->add_option("--exclude-below", exclude_below,
                  "drop records with D2 - a below this gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      apply_config_file(sub, c.config_path);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  auto resolve_a = [&]() -> double {
    if (ratio >= 0.0) {
      if (D2 <= 0.0) {
        throw ConfigError("--ratio requires --D2 > 0");
      }
      return ratio * D2;
    }
    return a;
  };

  try {
    if (constant->parsed()) return cmd_constant(c, N, starts, !no_refine);
    if (minimize->parsed()) return cmd_minimize(c, N, a);
    if (sweep->parsed()) return cmd_sweep(c, ratios, D2);
    if (binding->parsed()) return cmd_binding(c, resolve_a());
    if (collapse->parsed())
      return cmd_collapse(c, resolve_a(), N, steps, init_path);
    if (dstar->parsed()) return cmd_dstar(c, starts);
    if (tail->parsed())
      return cmd_tail(c, checkpoint, orbital, r_lo, r_hi, model);
    if (fit->parsed()) return cmd_fit(c, csv, target, D2, exclude_below);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const InsufficientRecords& e) {
    std::cerr << "not enough records: " << e.what() << "\n";
    return 2;
  } catch (const DivergingObjective& e) {
    std::cerr << "objective diverged: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
