#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace lpl::cli;
  CLI::App app{"Class-level logit perturbation experiments"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* ts = app.add_subcommand("theory-sweep", "Closed-form (and optional Monte-Carlo) error sweep");
  ts->add_option("--config", sweep.config, "Config file")->required();
  ts->add_flag("--with-mc", sweep.with_mc, "Add Monte-Carlo columns");
  ts->add_option("--out", sweep.out, "CSV output file (default: stdout)");

  RunArgs train_args, analyze_args, datagen_args;
  auto* tr = app.add_subcommand("train", "Train a model and write metrics");
  tr->add_option("--config", train_args.config, "Config file")->required();
  tr->add_option("--out", train_args.out, "Output directory")->required();

  auto* an = app.add_subcommand("analyze", "Per-class relative loss variation of perturbation methods");
  an->add_option("--config", analyze_args.config, "Config file")->required();
  an->add_option("--out", analyze_args.out, "Output directory")->required();

  auto* dg = app.add_subcommand("datagen", "Generate a synthetic dataset CSV");
  dg->add_option("--config", datagen_args.config, "Config file")->required();
  dg->add_option("--out", datagen_args.out, "Output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*ts) return guarded("theory-sweep", [&] { return cmd_theory_sweep(sweep); });
  if (*tr) return guarded("train", [&] { return cmd_train(train_args); });
  if (*an) return guarded("analyze", [&] { return cmd_analyze(analyze_args); });
  return guarded("datagen", [&] { return cmd_datagen(datagen_args); });
}
