#include "seqmimo/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace seqmimo {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad integer for '" + key + "': " + value);
    }
}

double parse_f64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad number for '" + key + "': " + value);
    }
}

std::vector<std::int64_t> parse_i64_list(const std::string& key, const std::string& value) {
    std::vector<std::int64_t> out;
    for (const std::string& item : split_list(value)) out.push_back(parse_i64(key, item));
    if (out.empty()) throw config_error("empty list for '" + key + "'");
    return out;
}

}  // namespace

double parse_power_watts(const std::string& text) {
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw config_error("bad power value: " + text);
    }
    const std::string unit = trim(text.substr(pos));
    if (unit.empty() || unit == "W" || unit == "w") return value;
    if (unit == "mW" || unit == "mw") return value * 1e-3;
    if (unit == "uW" || unit == "uw") return value * 1e-6;
    if (unit == "dBm" || unit == "dbm") return dbm_to_watt(value);
    throw config_error("bad power unit: " + text);
}

MemoryModel parse_memory_model(const std::string& text) {
    if (text == "inf" || text == "infinite") {
        return {MemoryScheme::Infinite, 0};
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw config_error("memory model needs scheme:capacity (e.g. ft_ea:8MB): " + text);
    }
    MemoryModel model;
    try {
        model.scheme = scheme_from_string(text.substr(0, colon));
        model.capacity_bits = parse_capacity_bits(text.substr(colon + 1));
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (model.scheme == MemoryScheme::Infinite) {
        model.capacity_bits = 0;
    }
    return model;
}

std::string format_memory_model(const MemoryModel& model) {
    if (model.scheme == MemoryScheme::Infinite) return "inf";
    return to_string(model.scheme) + ":" + format_capacity(model.capacity_bits);
}

namespace {

void apply_key_value(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    try {
        if (key == "L") {
            spec.l_values = parse_i64_list(key, value);
        } else if (key == "K") {
            spec.k_values = parse_i64_list(key, value);
        } else if (key == "M") {
            spec.m_values = parse_i64_list(key, value);
        } else if (key == "memory") {
            spec.memory_models.clear();
            for (const std::string& item : split_list(value)) {
                spec.memory_models.push_back(parse_memory_model(item));
            }
            if (spec.memory_models.empty()) throw config_error("empty memory list");
        } else if (key == "option") {
            spec.options.clear();
            for (const std::string& item : split_list(value)) {
                spec.options.push_back(option_from_string(item));
            }
            if (spec.options.empty()) throw config_error("empty option list");
        } else if (key == "topology") {
            spec.topologies.clear();
            for (const std::string& item : split_list(value)) {
                spec.topologies.push_back(topology_from_string(item));
            }
            if (spec.topologies.empty()) throw config_error("empty topology list");
        } else if (key == "pilot_length") {
            spec.tau_p_values.clear();
            for (std::int64_t v : parse_i64_list(key, value)) {
                spec.tau_p_values.push_back(static_cast<int>(v));
            }
        } else if (key == "tx_power") {
            spec.tx_power_w = parse_power_watts(value);
        } else if (key == "noise_power") {
            spec.noise_power_w = parse_power_watts(value);
        } else if (key == "pilot_power") {
            spec.pilot_power_w = parse_power_watts(value);
        } else if (key == "area_side") {
            spec.area_side_m = parse_f64(key, value);
        } else if (key == "subcarriers") {
            spec.n_subcarriers = parse_i64(key, value);
        } else if (key == "bandwidth") {
            spec.bandwidth_hz = parse_f64(key, value);
        } else if (key == "prelog") {
            spec.prelog = parse_f64(key, value);
        } else if (key == "trials") {
            spec.num_trials = parse_i64(key, value);
        } else if (key == "seed") {
            spec.base_seed = static_cast<std::uint64_t>(parse_i64(key, value));
        } else if (key == "sweep") {
            spec.sweep_param = value;
        } else if (key == "preset") {
            spec.preset_name = value;
        } else {
            throw config_error("unknown configuration key: '" + key + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

}  // namespace

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_key_value(spec, key, value);
        } catch (const config_error& e) {
            throw config_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_override(ExperimentSpec& spec, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw config_error("override needs key=value: " + assignment);
    }
    apply_key_value(spec, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string spec_to_config_string(const ExperimentSpec& spec) {
    std::ostringstream out;
    auto join_i64 = [](const std::vector<std::int64_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s;
    };
    char buf[40];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "preset = " << spec.preset_name << "\n";
    out << "L = " << join_i64(spec.l_values) << "\n";
    out << "K = " << join_i64(spec.k_values) << "\n";
    out << "M = " << join_i64(spec.m_values) << "\n";
    out << "memory = ";
    for (std::size_t i = 0; i < spec.memory_models.size(); ++i) {
        if (i) out << ",";
        out << format_memory_model(spec.memory_models[i]);
    }
    out << "\noption = ";
    for (std::size_t i = 0; i < spec.options.size(); ++i) {
        if (i) out << ",";
        out << to_string(spec.options[i]);
    }
    out << "\ntopology = ";
    for (std::size_t i = 0; i < spec.topologies.size(); ++i) {
        if (i) out << ",";
        out << to_string(spec.topologies[i]);
    }
    out << "\npilot_length = ";
    for (std::size_t i = 0; i < spec.tau_p_values.size(); ++i) {
        if (i) out << ",";
        out << spec.tau_p_values[i];
    }
    out << "\ntx_power = " << num(spec.tx_power_w);
    out << "\nnoise_power = " << num(spec.noise_power_w);
    out << "\npilot_power = " << num(spec.pilot_power_w);
    out << "\narea_side = " << num(spec.area_side_m);
    out << "\nsubcarriers = " << spec.n_subcarriers;
    out << "\nbandwidth = " << num(spec.bandwidth_hz);
    out << "\nprelog = " << num(spec.prelog);
    out << "\ntrials = " << spec.num_trials;
    out << "\nseed = " << spec.base_seed;
    out << "\nsweep = " << spec.sweep_param << "\n";
    return out.str();
}

}  // namespace seqmimo
