#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flagdec/cli/commands.h"

using namespace flagdec::cli;

int main(int argc, char** argv) {
  CLI::App app{"flagdec: flag-qubit Steane memory simulation, decoding and attribution"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed, shots;
  std::optional<int> rounds, threads;
  std::optional<std::string> out, decoder;
  std::vector<double> pph;
  bool pph_given = false;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"gen-data", "Generate train/validation/test memory-experiment datasets"},
      {"train", "Train the configured network decoder, one checkpoint per epoch"},
      {"eval", "Logical error rates with Wilson intervals over the noise sweep"},
      {"explain", "Attribute decoder outputs to syndrome and flag bits"},
      {"dep", "Deterministic single-fault placement benchmark"},
      {"monitor", "Per-epoch fault-tolerance tracks over saved checkpoints"},
      {"report", "Decoder comparison table from evaluation artifacts"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Run seed");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--decoder", decoder, "lut | srnn-x | srnn-z | drnn | dnn2");
    sub->add_option("--shots", shots, "Shots per (p_ph, t) point");
    sub->add_option("--pph", pph, "Physical error rates, comma separated")
        ->delimiter(',')
        ->each([&](const std::string&) { pph_given = true; });
    sub->add_option("--rounds", rounds, "Maximum number of QEC rounds");
    sub->add_option("--threads", threads, "Worker threads (0 = hardware)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) c = load_config(config_path);
    if (seed) c.seed = *seed;
    if (out) c.out = *out;
    if (decoder) c.decoder = decoder_from_name(*decoder);
    if (shots) c.eval.shots = *shots;
    if (pph_given) c.noise_sweep = pph;
    if (rounds) {
      c.data.max_rounds = *rounds;
      c.data.min_rounds = std::min(c.data.min_rounds, *rounds);
      c.eval.max_rounds = *rounds;
    }
    if (threads) c.threads = *threads;
    c.validate();
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  return run_command(app.get_subcommands().front()->get_name(), c, std::cout, std::cerr);
}
