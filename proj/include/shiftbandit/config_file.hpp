#pragma once

#include <iosfwd>
#include <string>

#include "shiftbandit/experiment.hpp"

namespace shiftbandit {

// Flat `key = value` text config. `#` starts a comment, blank lines are
// ignored, lists are comma-separated, phases use `gamma:rounds` pairs, and
// `lambda = auto` defers to the generated field's smoothness bound. Unknown
// and repeated keys are errors. See configs/ for annotated examples.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace shiftbandit
