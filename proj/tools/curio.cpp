#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "curio/config.hpp"
#include "curio/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "curio: curiosity-reward decision model — simulation, particle-filter "
      "decoding, recovery validation and analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string decoder_name;
  std::string input;
  std::string ssq_path;
  std::uint64_t seed = 0;
  bool quiet = false;

  auto* config_opt = app.add_option("--config", config_path,
                                    "Run configuration file (key = value lines)");
  auto* seed_opt =
      app.add_option("--seed", seed, "Root RNG seed (overrides config)");
  auto* out_opt =
      app.add_option("--out", out_dir, "Output directory (overrides config)");
  auto* dec_opt =
      app.add_option("--decoder", decoder_name, "Decoder for `decode`")
          ->check(CLI::IsMember({"ifep", "subjective", "qlearning"}));
  auto* quiet_flag = app.add_flag("--quiet", quiet, "Suppress progress output");
  auto* input_opt = app.add_option(
      "--input", input, "Input file or directory (overrides config)");
  auto* ssq_opt =
      app.add_option("--ssq", ssq_path, "SSQ scores CSV (overrides config)");

  auto* sim = app.add_subcommand(
      "simulate", "Run the generative model; write trace.csv and a synthetic "
                  "speed/EDA session");
  auto* dec = app.add_subcommand(
      "decode", "Decode latent trajectories from raw sessions or trial "
                "records");
  auto* val = app.add_subcommand(
      "validate", "Recovery sweep over drift-mismatch values; write "
                  "rmse_sweep.csv");
  auto* ana = app.add_subcommand(
      "analyze", "Lagged correlations, SSQ association and report.json from "
                 "decode artifacts");
  for (auto* sub : {sim, dec, val, ana}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    curio::RunConfig cfg;
    if (config_opt->count() > 0) cfg = curio::parse_config_file(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.out = out_dir;
    if (dec_opt->count() > 0) cfg.decoder = curio::decoder_from_string(decoder_name);
    if (quiet_flag->count() > 0) cfg.quiet = true;
    if (input_opt->count() > 0) cfg.input = input;
    if (ssq_opt->count() > 0) cfg.ssq_csv = ssq_path;

    if (sim->parsed()) return curio::run_simulate(cfg);
    if (dec->parsed()) return curio::run_decode(cfg);
    if (val->parsed()) return curio::run_validate(cfg);
    return curio::run_analyze(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
