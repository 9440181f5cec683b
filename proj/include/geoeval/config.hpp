#pragma once

#include <string>

#include "geoeval/experiment.hpp"
#include "geoeval/synth.hpp"

namespace geoeval {

// Plain-text configuration: `[section]` headers, `key = value` lines, `#`
// comments. Sections: [synth], [forest], [dav], [experiment]. Keys mirror
// the config struct fields verbatim; unknown sections or keys are errors.
// The [forest] section configures the one forest used everywhere (the
// adversarial classifier runs with the same hyperparameters).
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// The full effective configuration, in the same format, defaults included.
// Feeding it back through the parser reproduces the run.
std::string resolved_config(const ExperimentConfig& cfg);

}  // namespace geoeval
