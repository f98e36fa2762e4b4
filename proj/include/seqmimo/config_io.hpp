#pragma once

#include <stdexcept>
#include <string>

#include "seqmimo/experiment.hpp"

namespace seqmimo {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Applies "key = value" lines from a config file; '#' starts a comment.
/// Unknown keys are rejected by name.
void apply_config_file(ExperimentSpec& spec, const std::string& path);

/// Applies one "key=value" override (same keys as the config file).
void apply_override(ExperimentSpec& spec, const std::string& assignment);

/// Effective configuration as config-file text; reapplying it reproduces the run.
std::string spec_to_config_string(const ExperimentSpec& spec);

/// "10mW", "-85dBm" or plain watts.
double parse_power_watts(const std::string& text);

/// Memory model string: "inf", "fap:256KB", "ft_ea:8MB", "ft_la:8MB".
MemoryModel parse_memory_model(const std::string& text);
std::string format_memory_model(const MemoryModel& model);

}  // namespace seqmimo
