// Command line front end: validate instances, find fixed points, test
// endogeny, certify convex order, and cross-check with tree simulation.
//
// Exit codes: 0 success, 1 input error, 2 inconclusive outcome, 3 resource
// budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdelab/bundled.hpp"
#include "rdelab/endogeny.hpp"
#include "rdelab/errors.hpp"
#include "rdelab/higher_level.hpp"
#include "rdelab/io.hpp"
#include "rdelab/parallel.hpp"
#include "rdelab/rng.hpp"
#include "rdelab/rtp.hpp"
#include "rdelab/sampling.hpp"

namespace {

using rdelab::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
  std::string command;
  std::string instance;
  double tol = 1e-10;
  int t_max = 2000;
  int depth = 5;
  long samples = 100000;
  std::uint64_t seed = 0;
  std::string mode = "exact";
  double merge_eps = rdelab::kNormTol;
  long particles = 10000;
  int starts = 32;
  std::string format = "json";
  std::string out;
};

// Reports embed the resolved run configuration so a run can be reproduced
// from its own output. Thread count is deliberately absent: results do not
// depend on it.
Json config_to_json(const RunConfig& c) {
  return {{"command", c.command}, {"instance", c.instance},
          {"tol", c.tol},         {"t_max", c.t_max},
          {"depth", c.depth},     {"samples", c.samples},
          {"seed", c.seed},       {"mode", c.mode},
          {"merge_eps", c.merge_eps}, {"particles", c.particles},
          {"starts", c.starts},   {"format", c.format},
          {"out", c.out}};
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw rdelab::InputError("cannot write to " + c.out);
  f << text;
  if (text.empty() || text.back() != '\n') f << "\n";
}

void emit_json(const RunConfig& c, const Json& doc) {
  emit(c, doc.dump(2));
}

void require_json_format(const RunConfig& c) {
  if (c.format != "json") {
    throw rdelab::InputError(c.command + ": only --format json is supported");
  }
}

rdelab::Measure resolve_start(const rdelab::RdeSpec& spec,
                              const std::string& mu_path) {
  if (!mu_path.empty()) {
    rdelab::Measure mu = rdelab::load_measure_file(mu_path);
    if (!rdelab::same_space(mu.space(), spec.space())) {
      throw rdelab::InputError(mu_path +
                               ": state space differs from the instance");
    }
    return mu;
  }
  return rdelab::Measure::uniform(spec.space());
}

int cmd_validate(const RunConfig& cfg) {
  require_json_format(cfg);
  rdelab::RdeSpec spec = rdelab::load_spec_file(cfg.instance);
  Json doc = {{"config", config_to_json(cfg)},
              {"valid", true},
              {"states", spec.space()->labels()},
              {"noise_atoms", spec.num_noise()},
              {"max_arity", spec.max_arity()}};
  emit_json(cfg, doc);
  return kExitOk;
}

int cmd_fixpoint(const RunConfig& cfg) {
  require_json_format(cfg);
  rdelab::RdeSpec spec = rdelab::load_spec_file(cfg.instance);
  if (cfg.starts < 1) throw rdelab::InputError("fixpoint: need --starts >= 1");

  std::vector<rdelab::Measure> starts;
  starts.push_back(rdelab::Measure::uniform(spec.space()));
  rdelab::CounterRng rng =
      rdelab::CounterRng(cfg.seed).derive(rdelab::salt::kStart);
  for (int s = 1; s < cfg.starts; ++s) {
    rdelab::CounterRng local = rng.derive(std::uint64_t(s));
    starts.push_back(rdelab::random_measure(local, spec.space()));
  }

  rdelab::IterateOptions opts;
  opts.t_max = cfg.t_max;
  opts.tol = cfg.tol;

  struct Cluster {
    rdelab::Measure rep;
    int count;
  };
  std::vector<Cluster> clusters;
  int unconverged = 0;
  for (const rdelab::Measure& mu0 : starts) {
    rdelab::IterateResult run = rdelab::iterate_map(spec, mu0, opts);
    if (!run.converged) {
      ++unconverged;
      continue;
    }
    bool merged = false;
    for (Cluster& c : clusters) {
      if (rdelab::tv_distance(run.measure, c.rep) <= 10.0 * cfg.tol) {
        ++c.count;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({run.measure, 1});
  }

  Json points = Json::array();
  for (const Cluster& c : clusters) {
    double res = rdelab::tv_distance(rdelab::apply_map(spec, c.rep), c.rep);
    points.push_back({{"measure", rdelab::measure_to_json(c.rep)},
                      {"residual", res},
                      {"starts", c.count}});
  }
  Json doc = {{"config", config_to_json(cfg)},
              {"fixed_points", points},
              {"unconverged_starts", unconverged}};
  emit_json(cfg, doc);
  return unconverged == 0 ? kExitOk : kExitInconclusive;
}

int cmd_endogeny(const RunConfig& cfg, const std::string& mu_path,
                 bool t_max_given) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw rdelab::InputError("endogeny: --format must be json or csv");
  }
  rdelab::RdeSpec spec = rdelab::load_spec_file(cfg.instance);
  rdelab::Measure mu = resolve_start(spec, mu_path);
  if (mu_path.empty()) {
    // No explicit fixed point given: settle one from the uniform start.
    rdelab::IterateOptions iopts;
    iopts.t_max = cfg.t_max;
    iopts.tol = cfg.tol;
    rdelab::IterateResult run = rdelab::iterate_map(spec, mu, iopts);
    if (!run.converged) {
      std::cerr << "endogeny: no fixed point found from the uniform start "
                   "within "
                << cfg.t_max << " steps; pass one with --mu\n";
      return kExitInconclusive;
    }
    mu = run.measure;
  }

  rdelab::EndogenyOptions bopts;
  bopts.t_max = cfg.t_max;
  bopts.tol = cfg.tol;
  rdelab::EndogenyVerdict biv = rdelab::endogeny_bivariate(spec, mu, bopts);

  rdelab::HigherOptions hopts;
  hopts.mode = cfg.mode == "particle" ? rdelab::HigherMode::particle
                                      : rdelab::HigherMode::exact;
  hopts.t_max = t_max_given ? cfg.t_max : -1;
  hopts.tol = cfg.tol;
  hopts.merge_eps = cfg.merge_eps;
  hopts.particles = cfg.particles;
  hopts.seed = cfg.seed;
  hopts.threads = rdelab::resolve_threads();
  rdelab::EndogenyVerdict high = rdelab::endogeny_higher_level(spec, mu, hopts);

  bool routes_agree = biv.status == high.status;
  rdelab::EndogenyStatus overall =
      routes_agree ? biv.status : rdelab::EndogenyStatus::Inconclusive;

  if (cfg.format == "csv") {
    emit(cfg, rdelab::diag_trace_to_csv(biv.trace));
  } else {
    Json doc = {{"config", config_to_json(cfg)},
                {"mu", rdelab::measure_to_json(mu)},
                {"status", rdelab::to_string(overall)},
                {"routes_agree", routes_agree},
                {"bivariate", rdelab::endogeny_verdict_to_json(biv)},
                {"higher_level", rdelab::endogeny_verdict_to_json(high)}};
    emit_json(cfg, doc);
  }
  return overall == rdelab::EndogenyStatus::Inconclusive ? kExitInconclusive
                                                         : kExitOk;
}

int cmd_cvorder(const RunConfig& cfg, const std::string& rho1_path,
                const std::string& rho2_path) {
  require_json_format(cfg);
  rdelab::SimplexAtomMeasure rho1 = rdelab::load_atom_measure_file(rho1_path);
  rdelab::SimplexAtomMeasure rho2 = rdelab::load_atom_measure_file(rho2_path);
  rdelab::CvOptions opts;
  opts.merge_eps = cfg.merge_eps;
  rdelab::CvReport report = rdelab::check_convex_order(rho1, rho2, opts);
  Json doc = {{"config", config_to_json(cfg)},
              {"report", rdelab::cv_report_to_json(report)}};
  emit_json(cfg, doc);
  return report.verdict == rdelab::CvVerdict::Inconclusive ? kExitInconclusive
                                                           : kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& mu_path) {
  if (cfg.format != "json" && cfg.format != "csv") {
    throw rdelab::InputError("simulate: --format must be json or csv");
  }
  rdelab::RdeSpec spec = rdelab::load_spec_file(cfg.instance);
  rdelab::Measure boundary = resolve_start(spec, mu_path);
  int threads = rdelab::resolve_threads();

  rdelab::RootLawEstimate law = rdelab::empirical_root_law(
      spec, boundary, cfg.depth, cfg.samples, cfg.seed, threads);

  // Agreement of two coupled evaluations only makes sense at a fixed point.
  double fixed_res =
      rdelab::tv_distance(rdelab::apply_map(spec, boundary), boundary);
  Json agreement = nullptr;
  if (fixed_res <= 1e-8) {
    rdelab::McEstimate est = rdelab::coupled_agreement(
        spec, boundary, cfg.depth, cfg.samples, cfg.seed, threads);
    agreement = rdelab::mc_estimate_to_json(est);
  }

  if (cfg.format == "csv") {
    std::string csv = "state,frequency,std_error\n";
    for (int x = 0; x < law.law.size(); ++x) {
      csv += spec.space()->label(x) + "," + rdelab::format_double(law.law(x)) +
             "," + rdelab::format_double(law.std_errors(x)) + "\n";
    }
    emit(cfg, csv);
  } else {
    Json doc = {{"config", config_to_json(cfg)},
                {"boundary", rdelab::measure_to_json(boundary)},
                {"boundary_fixed_residual", fixed_res},
                {"coupled_agreement", agreement},
                {"root_law", rdelab::root_law_to_json(law)}};
    emit_json(cfg, doc);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed points, endogeny, and convex order for finite"
               " distributional recursions"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mu_path;
  std::string rho1_path;
  std::string rho2_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Convergence tolerance");
    sub->add_option("--max-iter", cfg.t_max, "Iteration cap");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--format", cfg.format, "Output format: json or csv");
    sub->add_option("--out", cfg.out, "Write the report here, not stdout");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("instance", cfg.instance, "Instance JSON")->required();
  add_common(validate);

  CLI::App* fixpoint =
      app.add_subcommand("fixpoint", "Multi-start fixed point search");
  fixpoint->add_option("instance", cfg.instance, "Instance JSON")->required();
  fixpoint->add_option("--starts", cfg.starts, "Number of starts");
  add_common(fixpoint);

  CLI::App* endogeny = app.add_subcommand(
      "endogeny", "Endogeny verdict via both iteration routes");
  endogeny->add_option("instance", cfg.instance, "Instance JSON")->required();
  endogeny->add_option("--mu", mu_path, "Fixed point file (default: settle"
                       " one from the uniform start)");
  endogeny->add_option("--mode", cfg.mode, "Lifted route mode: exact or"
                       " particle");
  endogeny->add_option("--merge-eps", cfg.merge_eps, "Atom merge tolerance");
  endogeny->add_option("--particles", cfg.particles, "Particle count");
  add_common(endogeny);

  CLI::App* cvorder = app.add_subcommand(
      "cvorder", "Convex order test between two atom-measure files");
  cvorder->add_option("rho1", rho1_path, "Left measure JSON")->required();
  cvorder->add_option("rho2", rho2_path, "Right measure JSON")->required();
  cvorder->add_option("--merge-eps", cfg.merge_eps, "Atom merge tolerance");
  add_common(cvorder);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Tree Monte Carlo: root law and coupled agreement");
  simulate->add_option("instance", cfg.instance, "Instance JSON")->required();
  simulate->add_option("--mu", mu_path, "Boundary law file (default uniform)");
  simulate->add_option("--depth", cfg.depth, "Tree depth");
  simulate->add_option("--samples", cfg.samples, "Sample count");
  add_common(simulate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      cfg.command = "validate";
      return cmd_validate(cfg);
    }
    if (fixpoint->parsed()) {
      cfg.command = "fixpoint";
      return cmd_fixpoint(cfg);
    }
    if (endogeny->parsed()) {
      cfg.command = "endogeny";
      if (cfg.mode != "exact" && cfg.mode != "particle") {
        throw rdelab::InputError("endogeny: --mode must be exact or particle");
      }
      return cmd_endogeny(cfg, mu_path, endogeny->count("--max-iter") > 0);
    }
    if (cvorder->parsed()) {
      cfg.command = "cvorder";
      cfg.instance = rho1_path;
      return cmd_cvorder(cfg, rho1_path, rho2_path);
    }
    cfg.command = "simulate";
    return cmd_simulate(cfg, mu_path);
  } catch (const rdelab::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const rdelab::InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const rdelab::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
