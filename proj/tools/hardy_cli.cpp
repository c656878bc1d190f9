// Command-line front end: one subcommand per task, config-driven, JSON
// report to stdout or --out, scan CSV to --csv, exit code per the harness
// taxonomy.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "hardy/hardy.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-weight Hardy inequality verifier"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path;
  int threads = 1;
  bool verbose = false;

  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"a2", "classify and evaluate the characterizing integral"},
      {"a1", "classify and evaluate the companion integral"},
      {"lemma1", "residual of the integration-by-parts identity"},
      {"sandwich", "two-sided bracket for the best constant"},
      {"admissible", "power-scale admissibility of a weight pair"},
      {"scan", "admissibility over a parameter grid, with CSV output"},
      {"prop1", "bound for monotone test functions"},
      {"prop2", "bound for mass-normalized averages"},
      {"ratio", "Hardy ratio of one test function"},
  };
  for (const auto& [name, description] : tasks) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON task configuration")
        ->required();
    sub->add_option("--out", out_path, "report file (default: stdout)");
    sub->add_option("--csv", csv_path, "CSV file for scan rows");
    sub->add_option("--threads", threads, "worker threads for scans")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "progress notes on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hardy::exit_config;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();

  hardy::RunOutcome outcome;
  try {
    const hardy::RunConfig cfg = hardy::load_config(config_path);
    if (cfg.task != chosen) {
      std::fprintf(stderr, "config task '%s' does not match subcommand '%s'\n",
                   cfg.task.c_str(), chosen.c_str());
      return hardy::exit_config;
    }
    outcome = hardy::run(cfg, threads, verbose);
  } catch (const hardy::io_error& ex) {
    std::fprintf(stderr, "%s\n", ex.what());
    return hardy::exit_config;
  } catch (const hardy::domain_error& ex) {
    std::fprintf(stderr, "%s\n", ex.what());
    return hardy::exit_config;
  }

  const std::string text = outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else if (!write_file(out_path, text)) {
    std::fprintf(stderr, "cannot write report to %s\n", out_path.c_str());
    return hardy::exit_config;
  }
  if (!csv_path.empty() && !write_file(csv_path, outcome.csv)) {
    std::fprintf(stderr, "cannot write CSV to %s\n", csv_path.c_str());
    return hardy::exit_config;
  }
  return outcome.exit_code;
}
