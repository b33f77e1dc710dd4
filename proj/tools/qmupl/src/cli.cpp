#include "qmupl/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <functional>
#include <ostream>

#include "commands.hpp"
#include "qmupl/errors.hpp"
#include "qmupl/units.hpp"

namespace qmupl::cli {

namespace {

struct Parsed {
  Common common;
  ConstantsArgs constants;
  SingleArgs single;
  DoubleArgs dbl;
  GridArgs grid;
  MasterArgs master;
  HittingArgs hitting;
  EnsembleArgs ensemble;
  VerifyArgs verify;
};

void add_common(CLI::App* sub, Common& c) {
  std::vector<std::string> presets = preset_names();
  presets.push_back("custom");
  sub->add_option("--preset", c.preset, "Particle preset")->check(CLI::IsMember(presets))->capture_default_str();
  sub->add_option("--nucleons", c.nucleons, "Body of this many nucleons (with --preset custom)")->capture_default_str();
  sub->add_option("--mass", c.mass, "Body mass in kg (with --preset custom)")->capture_default_str();
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--format", c.format, "csv, svg or both")
      ->check(CLI::IsMember({"csv", "svg", "both"}))
      ->capture_default_str();
}

void add_width(CLI::App* sub, WidthArgs& w) {
  sub->add_option("--a0-re", w.a0_re, "Initial width parameter, real part (0: stationary)");
  sub->add_option("--a0-im", w.a0_im, "Initial width parameter, imaginary part");
}

int category_exit(const std::exception& e, std::ostream& err) {
  const char* category = "internal";
  int code = numeric;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e)) {
    category = "schema";
    code = schema;
  } else if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const ContainmentError*>(&e) ||
             dynamic_cast<const DomainError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) {
    category = "numeric";
  }
  fmt::print(err, "error[{}]: {}\n", category, e.what());
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parsed p;
  CLI::App app{"Collapse-model dynamics: Gaussian packets, grids, ensembles and checks", "qmupl"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "INI file; keys go in a section named after the subcommand");
  app.require_subcommand(1, 1);

  std::function<int()> action;
  std::string command;
  auto sub = [&](const std::string& name, const std::string& help, std::function<int()> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, p.common);
    s->callback([&, name, fn] {
      command = name;
      action = fn;
    });
    return s;
  };

  auto* constants = sub("constants", "Derived constants of a body", [&] { return cmd_constants(p.common, p.constants, out); });
  constants->add_option("--separation", p.constants.separation, "Superposition distance, m")->capture_default_str();
  constants->add_option("--b", p.constants.b, "Suppression threshold")->capture_default_str();
  constants->add_option("--t", p.constants.t, "Time for alpha and the mean fluctuation, s")->capture_default_str();

  auto* single = sub("single", "Spread of one Gaussian packet, SI units", [&] { return cmd_single(p.common, p.single, out); });
  single->add_option("--sigma0", p.single.sigma0, "Initial spread(s), m")->capture_default_str();
  single->add_option("--horizon", p.single.horizon, "Final time, s (0: ten time units)");
  single->add_option("--points", p.single.points, "Time samples")->capture_default_str();
  single->add_flag("--log-time", p.single.log_time, "Logarithmic time axis");
  single->add_option("--threshold", p.single.threshold, "Localization threshold, m")->capture_default_str();

  auto* dbl = sub("double", "One path of a two-packet superposition", [&] { return cmd_double(p.common, p.dbl, out); });
  add_width(dbl, p.dbl.width);
  dbl->add_option("--X0", p.dbl.X0, "Initial separation")->capture_default_str();
  dbl->add_option("--K0", p.dbl.K0, "Initial wavenumber separation")->capture_default_str();
  dbl->add_option("--gamma0", p.dbl.gamma0, "Initial log weight ratio")->capture_default_str();
  dbl->add_option("--dt", p.dbl.dt, "Time step")->capture_default_str();
  dbl->add_option("--horizon", p.dbl.horizon, "Final time")->capture_default_str();
  dbl->add_option("--record-every", p.dbl.record_every, "Steps between CSV rows")->capture_default_str();

  auto* grid = sub("grid", "Two-packet superposition on a spatial grid", [&] { return cmd_grid(p.common, p.grid, out); });
  add_width(grid, p.grid.width);
  grid->add_option("--n", p.grid.n_points, "Grid points (power of two)")->capture_default_str();
  grid->add_option("--extent", p.grid.extent, "Domain length")->capture_default_str();
  grid->add_option("--X0", p.grid.X0, "Initial separation")->capture_default_str();
  grid->add_option("--gamma0", p.grid.gamma0, "Initial log weight ratio")->capture_default_str();
  grid->add_option("--dt", p.grid.dt, "Time step")->capture_default_str();
  grid->add_option("--horizon", p.grid.horizon, "Final time")->capture_default_str();
  grid->add_option("--record-every", p.grid.record_every, "Steps between CSV rows")->capture_default_str();

  auto* master = sub("master", "Averaged position density against free spreading", [&] { return cmd_master(p.common, p.master, out); });
  master->add_option("--a0-re", p.master.a0_re, "Initial width parameter, real part")->capture_default_str();
  master->add_option("--a0-im", p.master.a0_im, "Initial width parameter, imaginary part")->capture_default_str();
  master->add_option("--x0", p.master.x0, "Initial centre")->capture_default_str();
  master->add_option("--k0", p.master.k0, "Initial wavenumber")->capture_default_str();
  master->add_option("--t", p.master.t, "Time")->capture_default_str();
  master->add_option("--n", p.master.n_points, "Grid points")->capture_default_str();
  master->add_option("--extent", p.master.extent, "Domain length")->capture_default_str();
  master->add_option("--lo", p.master.lo, "Interval start for the probability measure")->capture_default_str();
  master->add_option("--hi", p.master.hi, "Interval end")->capture_default_str();

  auto* hitting = sub("hitting", "Suppression time of the weaker branch", [&] { return cmd_hitting(p.common, p.hitting, out); });
  hitting->add_option("--b", p.hitting.b, "Threshold")->capture_default_str();
  hitting->add_option("--b0", p.hitting.b0, "Initial log weight ratio")->capture_default_str();
  hitting->add_option("--eta", p.hitting.eta, "Dip depth after the hit")->capture_default_str();
  hitting->add_option("--dt", p.hitting.dt, "Step in the rescaled time")->capture_default_str();
  hitting->add_option("--s-max", p.hitting.s_max, "Rescaled-time horizon")->capture_default_str();
  hitting->add_option("--s-after", p.hitting.s_after, "Horizon after the hit")->capture_default_str();
  hitting->add_option("--paths", p.hitting.n_paths, "Number of paths")->capture_default_str();
  hitting->add_flag("--no-bridge", p.hitting.no_bridge, "Disable the between-step crossing test");
  hitting->add_option("--bins", p.hitting.bins, "Histogram bins")->capture_default_str();

  auto* ens = sub("ensemble", "Moments of any built-in scenario", [&] { return cmd_ensemble(p.common, p.ensemble, out); });
  ens->add_option("--scenario", p.ensemble.scenario, "Scenario name")->capture_default_str();
  ens->add_option("--param", p.ensemble.params, "Scenario parameter key=value (repeatable)");
  ens->add_option("--observable", p.ensemble.observables, "Recorded observable (repeatable; default all)");
  ens->add_option("--paths", p.ensemble.n_paths, "Number of paths")->capture_default_str();
  ens->add_option("--dt", p.ensemble.dt, "Time step")->capture_default_str();
  ens->add_option("--horizon", p.ensemble.horizon, "Final time")->capture_default_str();
  ens->add_option("--record-every", p.ensemble.record_every, "Steps between recorded times")->capture_default_str();
  ens->add_option("--threads", p.ensemble.threads, "Worker threads (0: all cores)");

  auto* verify = sub("verify", "Run an acceptance suite", [&] { return cmd_verify(p.common, p.verify, out); });
  verify->add_option("suite", p.verify.suite, "closed-forms, monte-carlo, grid-vs-gauss or all")->capture_default_str();
  verify->add_option("--n", p.verify.n_paths, "Paths for the Monte Carlo criteria")->capture_default_str();
  verify->add_option("--threads", p.verify.threads, "Worker threads (0: all cores)");

  std::vector<const char*> argv{"qmupl"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error[schema]: {}\n", e.what());
    return schema;
  }
  if (!action) return usage;
  p.common.config_text = app.get_subcommand(command)->config_to_str(true, false);
  try {
    return action();
  } catch (const std::exception& e) {
    return category_exit(e, err);
  }
}

}  // namespace qmupl::cli
