#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loewner/beam_model.hpp"
#include "loewner/config.hpp"
#include "loewner/errors.hpp"
#include "loewner/types.hpp"

namespace loewner::io {

/// Exit codes: 0 success, 2 config/data, 3 numerical, 4 I/O.
int exit_code_for(ErrorKind kind);

/// Transfer-function evaluator for a plant. Throws ConfigError for plants
/// that only exist as data (imported samples).
Evaluator make_evaluator(const PlantSpec& plant, const beam::BeamParams& params);

/// Entry point of the `loewner` tool; args excludes the program name.
/// Errors go to `err` as one JSON line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loewner::io
