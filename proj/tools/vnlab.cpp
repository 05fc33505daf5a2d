#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vnlab/plot.hpp"
#include "vnlab/scenario.hpp"
#include "vnlab/verify.hpp"

#ifndef VNLAB_GOLDEN_DIR
#define VNLAB_GOLDEN_DIR "tests/golden"
#endif

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailure = 1;
constexpr int kValidationError = 2;

int run_command(const std::string& target, const std::string& out_path, const vnlab::RunOptions& opt) {
  const auto result = vnlab::run_scenario(vnlab::load_config(target), opt);
  const std::string csv = result.csv(opt.deterministic);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw vnlab::InvalidInput("cannot write " + out_path);
    out << csv;
  }
  for (const auto& line : result.summary) std::cerr << line << '\n';
  for (const auto& f : result.failures) std::cerr << "assertion failed: " << f << '\n';
  std::cerr << result.name << ": " << result.rows.size() << " rows, "
            << (result.ok() ? "all assertions hold" : std::to_string(result.failures.size()) + " assertion failures")
            << '\n';
  return result.ok() ? kOk : kAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vertex nomination lab"};
  app.require_subcommand(1);

  vnlab::RunOptions ropt;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--jobs", ropt.jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* trials_opt = app.add_option("--trials-override", trials, "replace every trial count")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", ropt.deterministic, "omit the timestamp so output is byte-reproducible");

  auto* run = app.add_subcommand("run", "run a scenario config file or builtin scenario");
  std::string target, out_path;
  run->add_option("scenario", target, "JSON config path or builtin name")->required();
  run->add_option("--out", out_path, "write CSV here instead of stdout");

  auto* list = app.add_subcommand("list", "list builtin scenarios");

  auto* plot = app.add_subcommand("plot", "render a result CSV as SVG");
  std::string csv_path, svg_path;
  plot->add_option("csv", csv_path)->required();
  plot->add_option("svg", svg_path)->required();

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  vnlab::VerifyOptions vopt;
  vopt.golden_dir = VNLAB_GOLDEN_DIR;
  std::vector<int> only;
  verify->add_flag("--freeze-goldens", vopt.freeze, "write golden files from this run");
  verify->add_option("--golden-dir", vopt.golden_dir);
  verify->add_option("--only", only, "criterion ids to run (skips the golden regressions)");
  verify->add_flag("--goldens-only", vopt.goldens_only, "run only the golden regressions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }
  if (*seed_opt) ropt.seed = seed;
  if (*trials_opt) ropt.trials_override = trials;

  try {
    if (*run) return run_command(target, out_path, ropt);
    if (*list) {
      for (const auto& b : vnlab::builtin_scenarios()) std::cout << b.name << "\t" << b.description << '\n';
      return kOk;
    }
    if (*plot) {
      vnlab::emit_plot(csv_path, svg_path);
      return kOk;
    }
    if (*verify) {
      vopt.jobs = ropt.jobs;
      vopt.only.insert(only.begin(), only.end());
      const auto results = vnlab::run_acceptance(vopt, std::cout);
      bool ok = true;
      for (const auto& r : results) ok = ok && r.pass;
      if (vopt.only.empty())
        for (const auto& g : vnlab::run_golden_regressions(vopt)) {
          std::cout << (g.pass ? "PASS" : "FAIL") << " golden " << g.file << " -- " << g.detail << std::endl;
          ok = ok && g.pass;
        }
      return ok ? kOk : kAssertionFailure;
    }
  } catch (const vnlab::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const vnlab::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const vnlab::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertionFailure;
  }
  return kOk;
}
