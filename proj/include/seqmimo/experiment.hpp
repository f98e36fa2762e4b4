#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "seqmimo/compression.hpp"
#include "seqmimo/resources.hpp"
#include "seqmimo/scenario.hpp"

namespace seqmimo {

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Monte-Carlo sweep: the Cartesian product of the axes below, each point
/// averaged over `num_trials` independent channel and placement draws.
struct ExperimentSpec {
    std::vector<std::int64_t> l_values{2, 4, 8, 16, 32, 64, 128};
    std::vector<std::int64_t> k_values{4};
    std::vector<std::int64_t> m_values{128};
    std::vector<MemoryModel> memory_models{{MemoryScheme::Infinite, 0}};
    std::vector<CompressionOption> options{CompressionOption::VectorWise};
    std::vector<TopologyKind> topologies{TopologyKind::DaisyChain};
    std::vector<int> tau_p_values{0};  // 0 = perfect CSI

    double tx_power_w = 0.01;
    double noise_power_w = dbm_to_watt(-85.0);
    double area_side_m = 180.0;
    std::int64_t n_subcarriers = 4096;
    double bandwidth_hz = 100e6;
    double prelog = 1.0;
    double pilot_power_w = 0;  // 0 = reuse tx_power_w

    std::int64_t num_trials = 500;
    std::uint64_t base_seed = 12345;
    std::string sweep_param = "L";  // "L" or "capacity_bits"
    std::string preset_name = "Custom";

    void validate() const;
};

struct ReportRow {
    std::string sweep_param;
    double sweep_value = 0;
    std::string option;  // "vc", "ec", "ec_eq", "pca_ec", "none"
    MemoryScheme memory_scheme = MemoryScheme::Infinite;
    std::int64_t capacity_bits = 0;
    TopologyKind topology = TopologyKind::DaisyChain;
    std::int64_t num_users = 0;
    std::int64_t total_antennas = 0;
    std::int64_t num_aps = 0;
    int tau_p = 0;
    double mean_se = 0;  // per-user, bits/s/Hz
    double std_se = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    bool feasible = true;
    std::vector<double> per_trial;  // per-user SE per trial, in trial order
};

struct SEReport {
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

struct RunOptions {
    int jobs = 0;  // 0 = all hardware threads, 1 = serial reference
};

/// Serial reference implementation of the sweep.
SEReport run_experiment_serial(const ExperimentSpec& spec);

/// OpenMP implementation; trial results land in per-trial slots and are
/// reduced in fixed order, so the output is identical to the serial run.
SEReport run_experiment_parallel(const ExperimentSpec& spec, int jobs);

SEReport run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Per-user SE of a single trial of a single sweep point, evaluated for every
/// requested option on the same channel draw; the unit of work both runners
/// share. Options evaluated on common draws keep the PCA/VC per-trial
/// equality observable in reports.
std::vector<double> evaluate_point_trial(const ExperimentSpec& spec, std::int64_t num_aps,
                                         std::int64_t num_users, std::int64_t total_antennas,
                                         const MemoryModel& memory,
                                         const std::vector<CompressionOption>& options,
                                         TopologyKind topology, int tau_p,
                                         std::uint64_t trial_seed);

enum class ReportFormat { Csv, PlotData };

void emit_report(const SEReport& report, std::ostream& out, ReportFormat format);
void emit_report(const SEReport& report, const std::string& path, ReportFormat format);

/// Named sweep configurations at full parameter scale; `desk` shrinks the
/// antenna count, subcarriers, capacities and trials for quick runs.
ExperimentSpec figure_preset(const std::string& name, bool desk = false);

std::vector<std::string> figure_preset_names();

}  // namespace seqmimo
