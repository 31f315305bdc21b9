#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "flagdec/cli/config.h"

namespace flagdec::cli {

enum ExitCode : int { kExitOk = 0, kExitInvalidConfig = 1, kExitMissingArtifact = 2, kExitCheckFailed = 3 };

// Missing input file or an input produced under a different config hash.
struct ArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int cmd_gen_data(const RunConfig& c, std::ostream& log);
int cmd_train(const RunConfig& c, std::ostream& log);
int cmd_eval(const RunConfig& c, std::ostream& log);
int cmd_explain(const RunConfig& c, std::ostream& log);
int cmd_dep(const RunConfig& c, std::ostream& log);
int cmd_monitor(const RunConfig& c, std::ostream& log);
int cmd_report(const RunConfig& c, std::ostream& log);

// Dispatches by subcommand name and maps exceptions to exit codes.
int run_command(const std::string& name, const RunConfig& c, std::ostream& log,
                std::ostream& err);

// Artifact locations under the output directory.
std::string dataset_path(const RunConfig& c, const std::string& split);
std::string checkpoint_path(const RunConfig& c, uint64_t epoch);
std::string final_checkpoint_path(const RunConfig& c);

}  // namespace flagdec::cli
