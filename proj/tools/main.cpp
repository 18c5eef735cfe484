#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fpp: first-passage percolation laboratory"};
  app.require_subcommand(1);

  fpp::cli::Options opts;
  uint64_t seed = 0;
  int32_t threads = 0;
  int verbose = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment config file");
    sub->add_option("--set", opts.overrides,
                    "override: section.key=value (repeatable)");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed override")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", threads, "worker threads (0 = auto)");
    sub->add_flag("-v,--verbose", verbose, "more output");
    sub->add_flag("-q,--quiet", quiet, "errors only");
  };

  CLI::App* bounds = app.add_subcommand(
      "bounds", "derive and print the certified constants and bound curves");
  CLI::App* run = app.add_subcommand(
      "run", "run the Monte Carlo experiment and persist records/summaries");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the invariant suite (and check records when present)");
  CLI::App* plot = app.add_subcommand(
      "plot", "emit SVG plots with CSV twins from a summary");
  for (CLI::App* sub : {bounds, run, verify, plot}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  opts.subcommand = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed")) opts.seed = seed;
  if (app.get_subcommands().front()->count("--threads")) opts.threads = threads;
  opts.verbosity = quiet ? 0 : (verbose > 0 ? 2 : 1);

  return fpp::cli::dispatch(opts);
}
