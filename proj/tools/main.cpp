#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parhyb/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Parallel hybrid-projection solver for intersections of variational "
      "inequalities, equilibrium problems, and fixed-point sets"};

  std::string config_path;
  std::string trace_path;
  int workers = 0;
  double tol = -1.0;
  int max_iter = 0;
  bool do_bench = false;
  bool quiet = false;

  app.add_option("--config", config_path, "path to a JSON run configuration")
      ->required();
  app.add_option("--workers", workers, "override the configured worker count")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "override the stopping tolerance")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-iter", max_iter, "override the iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--trace", trace_path, "override the trace CSV output path");
  app.add_flag("--bench", do_bench,
               "time the solve at each configured worker count and report "
               "speedups");
  app.add_flag("--quiet", quiet, "suppress the summary output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : parhyb::exit_code::invalid_params;
  }

  parhyb::RunConfig cfg;
  try {
    cfg = parhyb::load_run_config(config_path);
  } catch (const parhyb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parhyb::exit_code::invalid_params;
  }

  // Precedence: config < PARHYB_WORKERS < --workers.
  if (const char* env = std::getenv("PARHYB_WORKERS")) {
    try {
      cfg.workers = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: PARHYB_WORKERS is not an integer\n";
      return parhyb::exit_code::invalid_params;
    }
  }
  if (workers > 0) cfg.workers = workers;
  if (tol >= 0.0) cfg.tol = tol;
  if (max_iter > 0) cfg.max_iter = max_iter;
  if (!trace_path.empty()) cfg.trace_path = trace_path;
  if (quiet) cfg.quiet = true;

  return do_bench ? parhyb::bench(cfg, std::cout, std::cerr)
                  : parhyb::run(cfg, std::cout, std::cerr);
}
