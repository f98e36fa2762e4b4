#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqmimo/common.hpp"

namespace seqmimo {

enum class TopologyKind { DaisyChain, BinaryFanInTree };

std::string to_string(TopologyKind kind);
TopologyKind topology_from_string(const std::string& name);

/// Fronthaul layout. The processing level of an AP is its stage in the
/// pipeline; an AP at level v buffers (v-1)*N_sc received vectors.
struct Topology {
    TopologyKind kind = TopologyKind::DaisyChain;
    int num_aps = 0;
    std::vector<int> level;  // per AP, 1-based
    int depth = 0;
};

enum class MemoryScheme { FixedPerAp, FixedTotalEqual, FixedTotalLinear, Infinite };

std::string to_string(MemoryScheme scheme);
MemoryScheme scheme_from_string(const std::string& name);

struct MemoryModel {
    MemoryScheme scheme = MemoryScheme::Infinite;
    std::int64_t capacity_bits = 0;  // C_AP for FixedPerAp, C_T otherwise
};

/// Exact rational bit count; den == 0 encodes an unlimited budget.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Fraction infinite() { return {1, 0}; }
    bool is_infinite() const { return den == 0; }
    double value() const;
    Fraction reduced() const;
    bool operator==(const Fraction& other) const;
};

struct ResourcePlan {
    Topology topology;
    MemoryModel memory;
    std::vector<std::int64_t> stored;   // buffered vectors per AP
    std::vector<Fraction> bits_exact;   // bits per stored vector, exact
    std::vector<double> bits_per_vec;   // same as doubles (inf allowed)
};

/// Chain: AP l sits at level l. Tree: pairwise fan-in with level populations
/// halving per stage (power-of-two AP counts only).
Topology build_topology(TopologyKind kind, int num_aps);

std::vector<std::int64_t> stored_vectors(const Topology& topology, std::int64_t n_subcarriers);

/// Per-AP bit budgets under a memory model. Level-1 APs store nothing and get
/// an unlimited budget. Linear allocation is defined on chains only.
ResourcePlan make_resource_plan(const Topology& topology, const MemoryModel& memory,
                                std::int64_t n_subcarriers);

/// Allocated memory per AP (bits). For the fixed-per-AP schemes this includes
/// the level-1 AP's unused share.
std::vector<Fraction> allocated_bits(const ResourcePlan& plan);

struct FronthaulRate {
    double alpha_bits = 0;      // width of one user's soft estimate
    double rate_bps = 0;        // exact link rate
    double upper_bound_bps = 0; // valid when sum(gamma) >= max(gamma) + 1
};

/// Link rate between consecutive APs given fixed-point operand widths:
/// rho bits per combining weight, gamma_i bits per stored element.
FronthaulRate fronthaul_rate_bound(int num_users, std::int64_t n_subcarriers, double rho_bits,
                                   const Vec& element_bits, double symbol_duration_s);

/// "64KB", "8MB", or a raw bit count; binary prefixes, 1 KB = 8192 bits.
std::int64_t parse_capacity_bits(const std::string& text);
std::string format_capacity(std::int64_t bits);

}  // namespace seqmimo
