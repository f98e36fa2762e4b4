#include "seqmimo/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "seqmimo/estimation.hpp"
#include "seqmimo/rng.hpp"

namespace seqmimo {

void ExperimentSpec::validate() const {
    if (l_values.empty() || k_values.empty() || m_values.empty() || memory_models.empty() ||
        options.empty() || topologies.empty() || tau_p_values.empty()) {
        throw std::invalid_argument("ExperimentSpec: every sweep axis needs at least one value");
    }
    if (num_trials < 1) {
        throw std::invalid_argument("ExperimentSpec: need at least one trial");
    }
    if (tx_power_w <= 0 || noise_power_w <= 0 || area_side_m <= 0 || bandwidth_hz <= 0) {
        throw std::invalid_argument("ExperimentSpec: physical parameters must be positive");
    }
    if (n_subcarriers < 1) {
        throw std::invalid_argument("ExperimentSpec: need at least one subcarrier");
    }
    if (prelog <= 0 || prelog > 1) {
        throw std::invalid_argument("ExperimentSpec: prelog must be in (0, 1]");
    }
    if (sweep_param != "L" && sweep_param != "capacity_bits") {
        throw std::invalid_argument("ExperimentSpec: sweep_param must be L or capacity_bits");
    }
}

namespace {

// One sweep point: everything except the compression option, which is
// evaluated per trial on the shared channel draw.
struct Point {
    std::int64_t m, k, l;
    MemoryModel memory;
    TopologyKind topology;
    int tau_p;
    std::vector<CompressionOption> options;
    std::size_t index;
    std::size_t row_base;
    bool feasible;
    std::string reason;
};

bool point_feasible(const Point& pt, std::string* reason) {
    if (pt.m % pt.l != 0) {
        *reason = "L does not divide M";
        return false;
    }
    if (pt.topology == TopologyKind::BinaryFanInTree &&
        !std::has_single_bit(static_cast<unsigned long long>(pt.l))) {
        *reason = "tree requires power-of-two L";
        return false;
    }
    if (pt.memory.scheme == MemoryScheme::FixedTotalLinear &&
        pt.topology == TopologyKind::BinaryFanInTree) {
        *reason = "linear allocation is chain-only";
        return false;
    }
    if (pt.tau_p > pt.k) {
        *reason = "pilot length exceeds user count";
        return false;
    }
    return true;
}

std::vector<Point> enumerate_points(const ExperimentSpec& spec) {
    std::vector<Point> points;
    std::size_t index = 0;
    std::size_t row_base = 0;
    for (std::int64_t m : spec.m_values)
        for (std::int64_t k : spec.k_values)
            for (int tau_p : spec.tau_p_values)
                for (TopologyKind topo : spec.topologies)
                    for (const MemoryModel& mem : spec.memory_models)
                        for (std::int64_t l : spec.l_values) {
                            Point pt;
                            pt.m = m;
                            pt.k = k;
                            pt.l = l;
                            pt.memory = mem;
                            pt.topology = topo;
                            pt.tau_p = tau_p;
                            // unlimited memory has a single meaningful option
                            pt.options = mem.scheme == MemoryScheme::Infinite
                                             ? std::vector<CompressionOption>{
                                                   CompressionOption::None}
                                             : spec.options;
                            pt.index = index++;
                            pt.row_base = row_base;
                            row_base += pt.options.size();
                            pt.feasible = point_feasible(pt, &pt.reason);
                            points.push_back(std::move(pt));
                        }
    return points;
}

ReportRow make_row(const ExperimentSpec& spec, const Point& pt, CompressionOption option) {
    ReportRow row;
    row.sweep_param = spec.sweep_param;
    row.sweep_value = spec.sweep_param == "capacity_bits"
                          ? static_cast<double>(pt.memory.capacity_bits)
                          : static_cast<double>(pt.l);
    row.option = to_string(option);
    if (spec.tau_p_values.size() > 1) {
        row.option += "@tp" + std::to_string(pt.tau_p);
    }
    row.memory_scheme = pt.memory.scheme;
    row.capacity_bits = pt.memory.capacity_bits;
    row.topology = pt.topology;
    row.num_users = pt.k;
    row.total_antennas = pt.m;
    row.num_aps = pt.l;
    row.tau_p = pt.tau_p;
    row.seed = spec.base_seed;
    row.feasible = pt.feasible;
    return row;
}

void finalize_row(ReportRow& row) {
    const auto n = static_cast<std::int64_t>(row.per_trial.size());
    row.trials = n;
    if (n == 0) {
        row.mean_se = std::numeric_limits<double>::quiet_NaN();
        row.std_se = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    double sum = 0.0;
    for (double v : row.per_trial) sum += v;
    row.mean_se = sum / static_cast<double>(n);
    if (n < 2) {
        row.std_se = 0.0;
        return;
    }
    double ss = 0.0;
    for (double v : row.per_trial) ss += (v - row.mean_se) * (v - row.mean_se);
    row.std_se = std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<std::pair<std::string, std::string>> make_metadata(const ExperimentSpec& spec);

}  // namespace

std::vector<double> evaluate_point_trial(const ExperimentSpec& spec, std::int64_t num_aps,
                                         std::int64_t num_users, std::int64_t total_antennas,
                                         const MemoryModel& memory,
                                         const std::vector<CompressionOption>& options,
                                         TopologyKind topology, int tau_p,
                                         std::uint64_t trial_seed) {
    ScenarioConfig cfg;
    cfg.num_aps = static_cast<int>(num_aps);
    cfg.antennas_per_ap = static_cast<int>(total_antennas / num_aps);
    cfg.num_users = static_cast<int>(num_users);
    cfg.tx_power_w = spec.tx_power_w;
    cfg.noise_power_w = spec.noise_power_w;
    cfg.area_side_m = spec.area_side_m;
    cfg.num_subcarriers = spec.n_subcarriers;
    cfg.bandwidth_hz = spec.bandwidth_hz;
    cfg.prelog = spec.prelog;
    cfg.pilot_length = tau_p;
    cfg.pilot_power_w = spec.pilot_power_w;
    cfg.validate();

    const Geometry geo = build_geometry(cfg, mix_seed(trial_seed, 1));
    ChannelRealization chan = sample_channel(geo, cfg, mix_seed(trial_seed, 2));
    if (tau_p > 0) {
        chan = estimate_channel(chan, cfg, cfg.effective_pilot_power(), mix_seed(trial_seed, 3));
    }

    const Topology topo = build_topology(topology, cfg.num_aps);
    const ResourcePlan plan = make_resource_plan(topo, memory, cfg.num_subcarriers);
    const double p = cfg.tx_power_w;

    std::vector<double> out;
    out.reserve(options.size());
    for (CompressionOption option : options) {
        std::vector<CMat> h_blocks(cfg.num_aps);
        std::vector<CMat> zinv_blocks(cfg.num_aps);
        for (int l = 0; l < cfg.num_aps; ++l) {
            const double sigma2 = chan.effective_noise(l);
            const double budget = plan.bits_per_vec[l];
            const CMat& h = chan.blocks[l];
            if (option == CompressionOption::None || std::isinf(budget)) {
                h_blocks[l] = h;
                zinv_blocks[l] = CMat::Identity(h.rows(), h.rows()) / sigma2;
                continue;
            }
            switch (option) {
                case CompressionOption::VectorWise: {
                    const CompressionSolution sol = solve_vc(h, p, sigma2, budget);
                    h_blocks[l] = h;
                    zinv_blocks[l] = noise_precision(sol, sigma2);
                    break;
                }
                case CompressionOption::ElementWise: {
                    const CompressionSolution sol = solve_ec(h, p, sigma2, budget);
                    h_blocks[l] = h;
                    zinv_blocks[l] = noise_precision(sol, sigma2);
                    break;
                }
                case CompressionOption::ElementWiseEqualBits: {
                    const CompressionSolution sol = solve_ec_equal_bits(h, p, sigma2, budget);
                    h_blocks[l] = h;
                    zinv_blocks[l] = noise_precision(sol, sigma2);
                    break;
                }
                case CompressionOption::PcaElementWise: {
                    const PcaMap map = pca_transform(h, p, sigma2);
                    const CompressionSolution sol = solve_pca_ec(map, sigma2, budget);
                    h_blocks[l] = map.effective_channel;
                    zinv_blocks[l] = noise_precision(sol, sigma2);
                    break;
                }
                case CompressionOption::None:
                    break;
            }
        }
        const double se = sum_se_exact(h_blocks, zinv_blocks, p, cfg.prelog);
        out.push_back(se / static_cast<double>(cfg.num_users));
    }
    return out;
}

namespace {

std::vector<double> run_trial(const ExperimentSpec& spec, const Point& pt, std::int64_t trial) {
    const std::uint64_t seed =
        mix_seed(spec.base_seed, pt.index, static_cast<std::uint64_t>(trial));
    return evaluate_point_trial(spec, pt.l, pt.k, pt.m, pt.memory, pt.options, pt.topology,
                                pt.tau_p, seed);
}

std::vector<ReportRow> make_rows(const ExperimentSpec& spec, const std::vector<Point>& points) {
    std::vector<ReportRow> rows;
    for (const Point& pt : points) {
        for (CompressionOption option : pt.options) {
            ReportRow row = make_row(spec, pt, option);
            if (pt.feasible) row.per_trial.resize(spec.num_trials);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

SEReport assemble(const ExperimentSpec& spec, std::vector<ReportRow>&& rows) {
    SEReport report;
    report.rows = std::move(rows);
    for (auto& row : report.rows) finalize_row(row);
    report.metadata = make_metadata(spec);
    return report;
}

}  // namespace

SEReport run_experiment_serial(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<Point> points = enumerate_points(spec);
    std::vector<ReportRow> rows = make_rows(spec, points);
    for (const Point& pt : points) {
        if (!pt.feasible) continue;
        for (std::int64_t t = 0; t < spec.num_trials; ++t) {
            const std::vector<double> values = run_trial(spec, pt, t);
            for (std::size_t o = 0; o < pt.options.size(); ++o) {
                rows[pt.row_base + o].per_trial[t] = values[o];
            }
        }
    }
    return assemble(spec, std::move(rows));
}

SEReport run_experiment_parallel(const ExperimentSpec& spec, int jobs) {
    spec.validate();
    if (jobs <= 0) jobs = omp_get_max_threads();
    const std::vector<Point> points = enumerate_points(spec);
    std::vector<ReportRow> rows = make_rows(spec, points);

    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].feasible) feasible.push_back(i);
    }

    // flatten (point, trial) into one task space; every task writes its own
    // slots, so the result is bit-identical to the serial reference
    const std::int64_t trials = spec.num_trials;
    const std::int64_t total = static_cast<std::int64_t>(feasible.size()) * trials;
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
    for (std::int64_t task = 0; task < total; ++task) {
        const Point& pt = points[feasible[static_cast<std::size_t>(task / trials)]];
        const std::int64_t trial = task % trials;
        const std::vector<double> values = run_trial(spec, pt, trial);
        for (std::size_t o = 0; o < pt.options.size(); ++o) {
            rows[pt.row_base + o].per_trial[trial] = values[o];
        }
    }
    return assemble(spec, std::move(rows));
}

SEReport run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    if (options.jobs == 1) {
        return run_experiment_serial(spec);
    }
    return run_experiment_parallel(spec, options.jobs);
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> make_metadata(const ExperimentSpec& spec) {
    auto join_i64 = [](const std::vector<std::int64_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s;
    };
    std::string mem;
    for (std::size_t i = 0; i < spec.memory_models.size(); ++i) {
        if (i) mem += ",";
        if (spec.memory_models[i].scheme == MemoryScheme::Infinite) {
            mem += "inf";
        } else {
            mem += to_string(spec.memory_models[i].scheme) + ":" +
                   std::to_string(spec.memory_models[i].capacity_bits);
        }
    }
    std::string opts;
    for (std::size_t i = 0; i < spec.options.size(); ++i) {
        if (i) opts += ",";
        opts += to_string(spec.options[i]);
    }
    std::string topos;
    for (std::size_t i = 0; i < spec.topologies.size(); ++i) {
        if (i) topos += ",";
        topos += to_string(spec.topologies[i]);
    }
    std::string taus;
    for (std::size_t i = 0; i < spec.tau_p_values.size(); ++i) {
        if (i) taus += ",";
        taus += std::to_string(spec.tau_p_values[i]);
    }
    return {
        {"version", "0.1.0"},
        {"preset", spec.preset_name},
        {"L", join_i64(spec.l_values)},
        {"K", join_i64(spec.k_values)},
        {"M", join_i64(spec.m_values)},
        {"memory", mem},
        {"option", opts},
        {"topology", topos},
        {"pilot_length", taus},
        {"tx_power", fmt_double(spec.tx_power_w)},
        {"noise_power", fmt_double(spec.noise_power_w)},
        {"area_side", fmt_double(spec.area_side_m)},
        {"subcarriers", std::to_string(spec.n_subcarriers)},
        {"bandwidth", fmt_double(spec.bandwidth_hz)},
        {"prelog", fmt_double(spec.prelog)},
        {"pilot_power", fmt_double(spec.pilot_power_w)},
        {"trials", std::to_string(spec.num_trials)},
        {"seed", std::to_string(spec.base_seed)},
        {"sweep", spec.sweep_param},
    };
}

}  // namespace

void emit_report(const SEReport& report, std::ostream& out, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        out << "sweep_param,sweep_value,option,memory_scheme,capacity_bits,topology,K,M,"
               "mean_se,std_se,trials,seed\n";
        for (const ReportRow& row : report.rows) {
            out << row.sweep_param << ',' << fmt_double(row.sweep_value) << ',' << row.option
                << ',' << to_string(row.memory_scheme) << ',' << row.capacity_bits << ','
                << to_string(row.topology) << ',' << row.num_users << ',' << row.total_antennas
                << ',' << fmt_double(row.mean_se) << ',' << fmt_double(row.std_se) << ','
                << row.trials << ',' << row.seed << '\n';
        }
        return;
    }

    // plot data: config echo, then one block per curve separated by blank lines
    for (const auto& [key, value] : report.metadata) {
        out << "# " << key << " = " << value << '\n';
    }
    std::vector<std::string> curve_order;
    std::map<std::string, std::vector<const ReportRow*>> curves;
    for (const ReportRow& row : report.rows) {
        std::string curve = "# curve: option=" + row.option +
                            " memory=" + to_string(row.memory_scheme) +
                            " capacity=" + std::to_string(row.capacity_bits) +
                            " topology=" + to_string(row.topology) +
                            " K=" + std::to_string(row.num_users) +
                            " M=" + std::to_string(row.total_antennas);
        auto [it, inserted] = curves.try_emplace(curve);
        if (inserted) curve_order.push_back(curve);
        it->second.push_back(&row);
    }
    for (const std::string& curve : curve_order) {
        out << '\n' << curve << '\n';
        for (const ReportRow* row : curves[curve]) {
            out << fmt_double(row->sweep_value) << ' ' << fmt_double(row->mean_se) << ' '
                << fmt_double(row->std_se) << '\n';
        }
    }
}

void emit_report(const SEReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    emit_report(report, out, format);
    if (!out.good()) {
        throw std::runtime_error("write failed: " + path);
    }
}

namespace {

std::vector<std::int64_t> powers_of_two_up_to(std::int64_t max_value) {
    std::vector<std::int64_t> v;
    for (std::int64_t x = 2; x <= max_value; x *= 2) v.push_back(x);
    return v;
}

MemoryModel mem(MemoryScheme scheme, const char* capacity) {
    return {scheme, parse_capacity_bits(capacity)};
}

}  // namespace

std::vector<std::string> figure_preset_names() {
    return {"Fig3", "Fig5", "Fig6", "Fig7", "Fig8", "Fig9", "Fig10", "Custom"};
}

ExperimentSpec figure_preset(const std::string& name, bool desk) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });

    ExperimentSpec spec;  // defaults: K=4, M=128, chain, VC, L sweep
    spec.preset_name = name;

    if (key == "custom") {
        // caller's configuration, untouched
    } else if (key == "fig3") {
        spec.k_values = {4, 64};
        spec.memory_models = {
            {MemoryScheme::Infinite, 0},    mem(MemoryScheme::FixedPerAp, "256KB"),
            mem(MemoryScheme::FixedPerAp, "64KB"), mem(MemoryScheme::FixedTotalEqual, "32MB"),
            mem(MemoryScheme::FixedTotalEqual, "8MB")};
    } else if (key == "fig5") {
        spec.sweep_param = "capacity_bits";
        spec.l_values = {32};
        spec.k_values = {4, 64};
        spec.memory_models = {
            mem(MemoryScheme::FixedPerAp, "64KB"),  mem(MemoryScheme::FixedPerAp, "128KB"),
            mem(MemoryScheme::FixedPerAp, "192KB"), mem(MemoryScheme::FixedPerAp, "256KB"),
            mem(MemoryScheme::FixedTotalEqual, "8MB"), mem(MemoryScheme::FixedTotalEqual, "16MB"),
            mem(MemoryScheme::FixedTotalEqual, "24MB"), mem(MemoryScheme::FixedTotalEqual, "32MB"),
            {MemoryScheme::Infinite, 0}};
    } else if (key == "fig6") {
        spec.m_values = {128, 256};
        spec.k_values = {4, 64};
        spec.l_values = {2, 4, 8, 16, 32, 64, 128, 256};  // L=256 only feasible at M=256
        spec.memory_models = {mem(MemoryScheme::FixedTotalEqual, "32MB"),
                              {MemoryScheme::Infinite, 0}};
    } else if (key == "fig7") {
        spec.k_values = {4, 64};
        spec.memory_models = {mem(MemoryScheme::FixedPerAp, "256KB"),
                              mem(MemoryScheme::FixedPerAp, "64KB")};
        spec.options = {CompressionOption::PcaElementWise, CompressionOption::VectorWise,
                        CompressionOption::ElementWise};
    } else if (key == "fig8") {
        spec.k_values = {4};
        spec.tau_p_values = {1, 2};
        spec.memory_models = {mem(MemoryScheme::FixedPerAp, "64KB"), {MemoryScheme::Infinite, 0}};
        spec.options = {CompressionOption::PcaElementWise, CompressionOption::VectorWise,
                        CompressionOption::ElementWise};
    } else if (key == "fig9") {
        spec.k_values = {4, 64};
        spec.memory_models = {
            mem(MemoryScheme::FixedTotalLinear, "8MB"), mem(MemoryScheme::FixedTotalEqual, "8MB"),
            mem(MemoryScheme::FixedTotalLinear, "32MB"),
            mem(MemoryScheme::FixedTotalEqual, "32MB")};
    } else if (key == "fig10") {
        spec.k_values = {4, 64};
        spec.topologies = {TopologyKind::BinaryFanInTree, TopologyKind::DaisyChain};
        spec.memory_models = {mem(MemoryScheme::FixedTotalEqual, "512KB"),
                              mem(MemoryScheme::FixedTotalEqual, "8MB")};
    } else {
        throw std::invalid_argument("unknown figure preset: " + name);
    }

    if (desk) {
        // shrink to a laptop-sized run: fewer antennas and subcarriers; the
        // per-vector bit budgets stay comparable because capacities scale
        // with the subcarrier count
        const std::int64_t old_nsc = spec.n_subcarriers;
        spec.n_subcarriers = 64;
        const std::int64_t scale = old_nsc / spec.n_subcarriers;
        std::int64_t max_m = 0;
        for (auto& m : spec.m_values) {
            m /= 8;  // 128 -> 16
            max_m = std::max(max_m, m);
        }
        if (spec.sweep_param == "L") {
            spec.l_values = powers_of_two_up_to(max_m);
        } else {
            for (auto& l : spec.l_values) l = std::max<std::int64_t>(2, l / 8);
        }
        for (auto& m : spec.memory_models) {
            if (m.scheme != MemoryScheme::Infinite) m.capacity_bits /= scale;
        }
        spec.num_trials = 100;
    }
    return spec;
}

}  // namespace seqmimo
