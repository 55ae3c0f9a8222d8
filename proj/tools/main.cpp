#include "scenario.hpp"

#include "equinox/equilibrium.hpp"
#include "equinox/error.hpp"
#include "equinox/fixed_point.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace equinox;
using cli::json;

enum Exit { kOk = 0, kValidation = 2, kSolver = 3, kIo = 4 };

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::schema:
      return kIo;
    case Errc::validation_failed:
      return kValidation;
    default:
      return kSolver;
  }
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("equinox");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::err);
  const char* env = std::getenv("EQUINOX_LOG");
  if (!env) return;
  const std::string level(env);
  if (level == "debug")
    spdlog::set_level(spdlog::level::debug);
  else if (level == "info")
    spdlog::set_level(spdlog::level::info);
  else if (level != "error")
    spdlog::warn("EQUINOX_LOG={} is not one of error, info, debug; using error", level);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty())
    std::cout << text;
  else
    cli::write_text(output, text);
}

int cmd_validate(const std::string& path, std::optional<std::uint64_t> seed) {
  const cli::Scenario sc = cli::load_scenario(path);
  const auto rep = equilibrium::validate_economy(sc.economy, seed.value_or(sc.solver.seed));
  std::cout << cli::dump(cli::to_json(rep));
  for (const auto& note : rep.notes) spdlog::info("{}", note);
  return rep.ok() ? kOk : kValidation;
}

struct SolveArgs {
  std::string path;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_refine;
  std::string output;
};

int cmd_solve(const SolveArgs& args) {
  const cli::Scenario sc = cli::load_scenario(args.path);
  equilibrium::SolveOptions opts;
  opts.epsilon = args.epsilon.value_or(sc.solver.epsilon);
  opts.seed = args.seed.value_or(sc.solver.seed);
  opts.max_refine = args.max_refine.value_or(sc.solver.max_refine);
  opts.verify_tol = sc.solver.verify_tol;

  auto t0 = std::chrono::steady_clock::now();
  const auto rep = equilibrium::validate_economy(sc.economy, opts.seed);
  const double t_validate = seconds_since(t0);
  json bundle{{"schema", cli::kSchemaVersion}, {"validation", cli::to_json(rep)}};
  if (!rep.ok()) {
    for (const auto& note : rep.notes) spdlog::error("{}", note);
    emit(cli::dump(bundle), args.output);
    return kValidation;
  }

  t0 = std::chrono::steady_clock::now();
  equilibrium::ApproximateEquilibrium eq;
  try {
    eq = equilibrium::solve(sc.economy, opts);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    bundle["error"] = e.what();
    emit(cli::dump(bundle), args.output);
    return exit_for(e);
  }
  const double t_solve = seconds_since(t0);
  spdlog::info("solved in {:.3f} s: p . eta = {}, dist(eta, Y) = {}", t_solve, eq.metrics.p_dot_eta,
               eq.metrics.dist_eta_to_y);

  t0 = std::chrono::steady_clock::now();
  const auto check = equilibrium::check_equilibrium(sc.economy, eq, opts.seed);
  const double t_check = seconds_since(t0);
  for (const auto& c : check.clauses)
    if (!c.pass) spdlog::error("clause {} failed: {}", c.name, c.detail);

  bundle["certificate"] = cli::to_json(eq);
  bundle["check"] = cli::to_json(check);
  bundle["timing"] = {{"validate_seconds", t_validate}, {"solve_seconds", t_solve}, {"check_seconds", t_check}};
  emit(cli::dump(bundle), args.output);
  return check.ok() ? kOk : kSolver;
}

int cmd_check(const std::string& scenario, const std::string& certificate, std::optional<std::uint64_t> seed) {
  const cli::Scenario sc = cli::load_scenario(scenario);
  const auto eq = cli::certificate_from_json(cli::read_json(certificate));
  const auto rep = equilibrium::check_equilibrium(sc.economy, eq, seed.value_or(sc.solver.seed));
  std::cout << cli::dump(cli::to_json(rep));
  for (const auto& c : rep.clauses)
    if (!c.pass) std::cerr << "clause " << c.name << " failed: " << c.detail << "\n";
  return rep.ok() ? kOk : kSolver;
}

int cmd_sweep(const std::string& path, double eps0, int k, std::optional<std::uint64_t> seed, const std::string& output) {
  const cli::Scenario sc = cli::load_scenario(path);
  const auto seq = equilibrium::refine_sequence(sc.economy, eps0, k, seed.value_or(sc.solver.seed));
  emit(cli::sweep_csv(seq, sc.economy.dimension()), output);
  if (seq.error) {
    spdlog::error("sweep stopped early: {}", *seq.error);
    return kSolver;
  }
  return kOk;
}

int cmd_ivt(const std::string& coefficients, double eps) {
  std::vector<double> c;
  std::stringstream in(coefficients);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::schema, "--function expects comma-separated numbers, got \"" + item + "\"");
    }
  }
  if (c.empty()) throw Error(Errc::schema, "--function needs at least one coefficient");
  auto f = [&](double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  const auto z = fixed_point::approximate_zero(f, eps);
  spdlog::info("f(x) = {} on a grid of pitch 1/{}", z.value, z.grid);
  std::cout << json(z.x).dump() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Approximate competitive equilibria of convex production economies"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string scenario, certificate, output;

  auto* validate = app.add_subcommand("validate", "Check the economy's hypotheses");
  validate->add_option("scenario", scenario, "Scenario JSON file")->required();
  validate->add_option("--seed", seed, "Seed for witness searches");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute and verify an approximate equilibrium");
  solve_cmd->add_option("scenario", solve.path, "Scenario JSON file")->required();
  solve_cmd->add_option("--epsilon", solve.epsilon, "Profit-loss tolerance");
  solve_cmd->add_option("--seed", solve.seed, "Seed");
  solve_cmd->add_option("--max-refine", solve.max_refine, "Refinement rounds of the simplicial search");
  solve_cmd->add_option("--output", solve.output, "Write the result bundle here instead of standard output");

  auto* check = app.add_subcommand("check", "Re-verify a certificate against a scenario");
  check->add_option("scenario", scenario, "Scenario JSON file")->required();
  check->add_option("certificate", certificate, "Certificate or result bundle JSON")->required();
  check->add_option("--seed", seed, "Seed");

  double eps0 = 0.1;
  int k = 4;
  auto* sweep = app.add_subcommand("sweep", "Solve at epsilon = eps0 2^-n for n = 0..k and print CSV");
  sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--eps0", eps0, "Largest epsilon")->capture_default_str();
  sweep->add_option("--k", k, "Number of halvings, at most 12")->capture_default_str();
  sweep->add_option("--seed", seed, "Seed");
  sweep->add_option("--output", output, "Write the CSV here instead of standard output");

  std::string function;
  double ivt_eps = 1e-3;
  auto* ivt = app.add_subcommand("ivt", "Approximate zero of a polynomial on [0, 1]");
  ivt->add_option("--function", function, "Coefficients, constant term first, e.g. -1,2 for 2x - 1")
      ->required()
      ->allow_extra_args(false);
  ivt->add_option("--epsilon", ivt_eps, "Tolerance on |f(x)|")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    if (*validate) return cmd_validate(scenario, seed);
    if (*solve_cmd) return cmd_solve(solve);
    if (*check) return cmd_check(scenario, certificate, seed);
    if (*sweep) return cmd_sweep(scenario, eps0, k, seed, output);
    if (*ivt) return cmd_ivt(function, ivt_eps);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  }
  return kIo;
}
