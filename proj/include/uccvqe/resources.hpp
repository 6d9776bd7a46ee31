#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "uccvqe/ansatz.hpp"

namespace uccvqe {

// Circuit-level cost proxies for an ansatz: one "term" per excitation (the
// exponential of one generator term), layered by disjoint spin-orbital
// support. Mapping overhead of any particular qubit encoding is excluded.
struct ResourceEstimate {
    AnsatzKind kind = AnsatzKind::Uccsd;
    int n_spin_orbitals = 0;
    int eta = 0; // electron count
    int k = 1;
    long singles = 0;
    long doubles = 0;
    long pair_doubles = 0;
    long term_count = 0;
    long layer_count = 0;
};

// Term and per-class counts only (layer_count left 0).
ResourceEstimate count_resources(const Ansatz& ansatz);

// Greedy first-fit scheduling in canonical term order: each term goes to the
// first existing layer whose accumulated support is disjoint from its own.
// Blocks never share layers, so k identical blocks cost exactly k times one
// block. Returned layers are ordered; every layer is internally disjoint.
std::vector<std::vector<Excitation>> schedule_layers(const Ansatz& ansatz);

// count_resources plus the layer count from schedule_layers.
ResourceEstimate estimate_resources(const Ansatz& ansatz);

struct ScalingRow {
    int n_spin_orbitals = 0;
    int eta = 0;
    long singles = 0;
    long doubles = 0;
    long pair_doubles = 0;
    long term_count = 0;
    long layer_count = 0;
};

// Resource table over (N, eta) sizes with fitted log-log growth exponents of
// term_count and layer_count against N.
struct ScalingReport {
    AnsatzKind kind = AnsatzKind::Uccsd;
    int k = 1;
    std::vector<ScalingRow> rows;
    double term_exponent = 0.0;
    double layer_exponent = 0.0;
};

ScalingReport scaling_report(AnsatzKind kind, int k,
                             std::span<const std::pair<int, int>> sizes);

// CSV: kind,k,N,eta,terms_singles,terms_doubles,terms_pair,term_count,layer_count
void write_scaling_csv(const ScalingReport& report, std::ostream& out);

} // namespace uccvqe
