#pragma once

#include "run_config.hpp"

namespace faithlab::cli {

void cmd_simulate(const RunConfig& c);
void cmd_analyze(const RunConfig& c);
void cmd_chsh(const RunConfig& c);
void cmd_triad(const RunConfig& c);
void cmd_finetune(const RunConfig& c);
void cmd_equivalence(const RunConfig& c);

/// Dispatches on `c.command` and echoes the config into the output directory.
void execute(const RunConfig& c);

}  // namespace faithlab::cli
