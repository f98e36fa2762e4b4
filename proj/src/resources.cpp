#include "seqmimo/resources.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace seqmimo {

std::string to_string(TopologyKind kind) {
    return kind == TopologyKind::DaisyChain ? "chain" : "tree";
}

TopologyKind topology_from_string(const std::string& name) {
    if (name == "chain" || name == "daisy_chain") return TopologyKind::DaisyChain;
    if (name == "tree") return TopologyKind::BinaryFanInTree;
    throw std::invalid_argument("unknown topology: " + name);
}

std::string to_string(MemoryScheme scheme) {
    switch (scheme) {
        case MemoryScheme::FixedPerAp: return "fap";
        case MemoryScheme::FixedTotalEqual: return "ft_ea";
        case MemoryScheme::FixedTotalLinear: return "ft_la";
        case MemoryScheme::Infinite: return "inf";
    }
    return "?";
}

MemoryScheme scheme_from_string(const std::string& name) {
    if (name == "fap") return MemoryScheme::FixedPerAp;
    if (name == "ft_ea") return MemoryScheme::FixedTotalEqual;
    if (name == "ft_la") return MemoryScheme::FixedTotalLinear;
    if (name == "inf") return MemoryScheme::Infinite;
    throw std::invalid_argument("unknown memory scheme: " + name);
}

double Fraction::value() const {
    if (den == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num) / static_cast<double>(den);
}

Fraction Fraction::reduced() const {
    if (den == 0) return {1, 0};
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

bool Fraction::operator==(const Fraction& other) const {
    const Fraction a = reduced();
    const Fraction b = other.reduced();
    return a.num == b.num && a.den == b.den;
}

Topology build_topology(TopologyKind kind, int num_aps) {
    if (num_aps < 1) {
        throw std::invalid_argument("build_topology: need at least one AP");
    }
    Topology topo;
    topo.kind = kind;
    topo.num_aps = num_aps;
    topo.level.resize(num_aps);

    if (kind == TopologyKind::DaisyChain) {
        for (int i = 0; i < num_aps; ++i) topo.level[i] = i + 1;
        topo.depth = num_aps;
        return topo;
    }

    if (!std::has_single_bit(static_cast<unsigned>(num_aps))) {
        throw std::invalid_argument("build_topology: fan-in tree requires a power-of-two AP count");
    }
    // Pairwise fan-in: one AP at level 1, then populations halve per stage
    // until a single AP at the last level merges everything.
    topo.level[0] = 1;
    for (int i = 1; i < num_aps; ++i) {
        topo.level[i] = std::countr_zero(static_cast<unsigned>(i)) + 2;
    }
    topo.depth = num_aps == 1 ? 1 : std::bit_width(static_cast<unsigned>(num_aps));
    return topo;
}

std::vector<std::int64_t> stored_vectors(const Topology& topology, std::int64_t n_subcarriers) {
    std::vector<std::int64_t> counts(topology.num_aps);
    for (int i = 0; i < topology.num_aps; ++i) {
        counts[i] = static_cast<std::int64_t>(topology.level[i] - 1) * n_subcarriers;
    }
    return counts;
}

ResourcePlan make_resource_plan(const Topology& topology, const MemoryModel& memory,
                                std::int64_t n_subcarriers) {
    if (memory.scheme != MemoryScheme::Infinite && memory.capacity_bits <= 0) {
        throw std::invalid_argument("make_resource_plan: finite schemes need a positive capacity");
    }
    if (memory.scheme == MemoryScheme::FixedTotalLinear &&
        topology.kind != TopologyKind::DaisyChain) {
        throw std::invalid_argument("make_resource_plan: linear allocation is chain-only");
    }

    ResourcePlan plan;
    plan.topology = topology;
    plan.memory = memory;
    plan.stored = stored_vectors(topology, n_subcarriers);
    plan.bits_exact.resize(topology.num_aps);
    plan.bits_per_vec.resize(topology.num_aps);

    const std::int64_t l = topology.num_aps;
    for (int i = 0; i < topology.num_aps; ++i) {
        Fraction bits;
        if (memory.scheme == MemoryScheme::Infinite || plan.stored[i] == 0) {
            bits = Fraction::infinite();
        } else {
            switch (memory.scheme) {
                case MemoryScheme::FixedPerAp:
                    bits = {memory.capacity_bits, plan.stored[i]};
                    break;
                case MemoryScheme::FixedTotalEqual:
                    bits = {memory.capacity_bits, l * plan.stored[i]};
                    break;
                case MemoryScheme::FixedTotalLinear:
                    bits = {2 * memory.capacity_bits, l * (l - 1) * n_subcarriers};
                    break;
                case MemoryScheme::Infinite:
                    break;
            }
        }
        plan.bits_exact[i] = bits.reduced();
        plan.bits_per_vec[i] = bits.value();
    }
    return plan;
}

std::vector<Fraction> allocated_bits(const ResourcePlan& plan) {
    std::vector<Fraction> alloc(plan.topology.num_aps);
    const std::int64_t l = plan.topology.num_aps;
    for (int i = 0; i < plan.topology.num_aps; ++i) {
        switch (plan.memory.scheme) {
            case MemoryScheme::Infinite:
                alloc[i] = Fraction::infinite();
                break;
            case MemoryScheme::FixedPerAp:
                alloc[i] = {plan.memory.capacity_bits, 1};
                break;
            case MemoryScheme::FixedTotalEqual:
                alloc[i] = {plan.memory.capacity_bits, l};
                break;
            case MemoryScheme::FixedTotalLinear:
                // share proportional to the stored count
                alloc[i] = Fraction{2 * plan.memory.capacity_bits *
                                        (plan.topology.level[i] - 1),
                                    l * (l - 1)}
                               .reduced();
                break;
        }
    }
    return alloc;
}

FronthaulRate fronthaul_rate_bound(int num_users, std::int64_t n_subcarriers, double rho_bits,
                                   const Vec& element_bits, double symbol_duration_s) {
    if (rho_bits < 0 || symbol_duration_s <= 0) {
        throw std::invalid_argument("fronthaul_rate_bound: invalid widths or symbol duration");
    }
    double max_gamma = 0.0;
    double sum_gamma = 0.0;
    for (Eigen::Index i = 0; i < element_bits.size(); ++i) {
        if (element_bits(i) < 0) {
            throw std::invalid_argument("fronthaul_rate_bound: negative element width");
        }
        max_gamma = std::max(max_gamma, element_bits(i));
        sum_gamma += element_bits(i);
    }
    FronthaulRate out;
    out.alpha_bits = rho_bits + max_gamma + 1.0;
    const double per_symbol = static_cast<double>(num_users) * static_cast<double>(n_subcarriers);
    out.rate_bps = per_symbol * out.alpha_bits / symbol_duration_s;
    out.upper_bound_bps = per_symbol * (rho_bits + sum_gamma) / symbol_duration_s;
    return out;
}

std::int64_t parse_capacity_bits(const std::string& text) {
    if (text.empty()) {
        throw std::invalid_argument("empty capacity string");
    }
    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad capacity: " + text);
    }
    std::string unit = text.substr(pos);
    double scale = 1.0;
    if (unit == "KB" || unit == "kb" || unit == "kB") {
        scale = 8192.0;
    } else if (unit == "MB" || unit == "mb") {
        scale = 8192.0 * 1024.0;
    } else if (unit == "GB" || unit == "gb") {
        scale = 8192.0 * 1024.0 * 1024.0;
    } else if (unit == "b" || unit == "bit" || unit == "bits" || unit.empty()) {
        scale = 1.0;
    } else {
        throw std::invalid_argument("bad capacity unit: " + text);
    }
    const double bits = value * scale;
    if (bits < 0 || bits > 9.0e18) {
        throw std::invalid_argument("capacity out of range: " + text);
    }
    return static_cast<std::int64_t>(std::llround(bits));
}

std::string format_capacity(std::int64_t bits) {
    const std::int64_t kb = 8192;
    const std::int64_t mb = kb * 1024;
    if (bits % mb == 0 && bits >= mb) return std::to_string(bits / mb) + "MB";
    if (bits % kb == 0 && bits >= kb) return std::to_string(bits / kb) + "KB";
    return std::to_string(bits);
}

}  // namespace seqmimo
