#include "uccvqe/resources.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "uccvqe/util.hpp"

namespace uccvqe {

ResourceEstimate count_resources(const Ansatz& ansatz) {
    ResourceEstimate est;
    est.kind = ansatz.kind;
    est.n_spin_orbitals = ansatz.n_spin_orbitals;
    est.eta = ansatz.n_alpha + ansatz.n_beta;
    est.k = ansatz.k;
    for (const auto& block : ansatz.blocks)
        for (const auto& exc : block) switch (exc.kind) {
                case ExcitationKind::Single: ++est.singles; break;
                case ExcitationKind::Double: ++est.doubles; break;
                case ExcitationKind::PairDouble: ++est.pair_doubles; break;
            }
    est.term_count = est.singles + est.doubles + est.pair_doubles;
    return est;
}

std::vector<std::vector<Excitation>> schedule_layers(const Ansatz& ansatz) {
    std::vector<std::vector<Excitation>> layers;
    std::vector<std::uint64_t> supports; // occupied spin orbitals per layer
    for (const auto& block : ansatz.blocks) {
        // block exponentials are ordered, so a block never shares layers with
        // its neighbours; scheduling restarts at the block boundary
        const std::size_t block_begin = layers.size();
        for (const auto& exc : block) {
            std::uint64_t mask = 0;
            for (const int s : excitation_support(exc)) mask |= std::uint64_t{1} << s;
            std::size_t slot = block_begin;
            while (slot < layers.size() && (supports[slot] & mask) != 0) ++slot;
            if (slot == layers.size()) {
                layers.emplace_back();
                supports.push_back(0);
            }
            layers[slot].push_back(exc);
            supports[slot] |= mask;
        }
    }
    return layers;
}

ResourceEstimate estimate_resources(const Ansatz& ansatz) {
    ResourceEstimate est = count_resources(ansatz);
    est.layer_count = static_cast<long>(schedule_layers(ansatz).size());
    return est;
}

ScalingReport scaling_report(AnsatzKind kind, int k,
                             std::span<const std::pair<int, int>> sizes) {
    if (sizes.size() < 2)
        throw std::invalid_argument("scaling: need at least two (N, eta) sizes for a fit");
    ScalingReport report;
    report.kind = kind;
    report.k = k;
    std::vector<double> log_n, log_terms, log_layers;
    for (const auto& [n, eta] : sizes) {
        if (eta < 1) throw std::invalid_argument("scaling: eta must be positive");
        const int n_alpha = (eta + 1) / 2;
        const int n_beta = eta / 2;
        const Ansatz ansatz = build_ansatz(kind, n, n_alpha, n_beta, k);
        const ResourceEstimate est = estimate_resources(ansatz);
        if (est.term_count == 0 || est.layer_count == 0)
            throw std::invalid_argument("scaling: size (" + std::to_string(n) + ", " +
                                        std::to_string(eta) + ") produces an empty ansatz");
        report.rows.push_back(ScalingRow{est.n_spin_orbitals, est.eta, est.singles, est.doubles,
                                         est.pair_doubles, est.term_count, est.layer_count});
        log_n.push_back(std::log(static_cast<double>(n)));
        log_terms.push_back(std::log(static_cast<double>(est.term_count)));
        log_layers.push_back(std::log(static_cast<double>(est.layer_count)));
    }
    report.term_exponent = ols_slope(log_n, log_terms);
    report.layer_exponent = ols_slope(log_n, log_layers);
    return report;
}

void write_scaling_csv(const ScalingReport& report, std::ostream& out) {
    out << "kind,k,N,eta,terms_singles,terms_doubles,terms_pair,term_count,layer_count\n";
    const std::string kind = to_string(report.kind);
    for (const auto& row : report.rows)
        out << kind << ',' << report.k << ',' << row.n_spin_orbitals << ',' << row.eta << ','
            << row.singles << ',' << row.doubles << ',' << row.pair_doubles << ','
            << row.term_count << ',' << row.layer_count << '\n';
}

} // namespace uccvqe
