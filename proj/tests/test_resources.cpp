#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "uccvqe/ansatz.hpp"
#include "uccvqe/resources.hpp"
#include "uccvqe/util.hpp"

using namespace uccvqe;

namespace {

using TermKey = std::pair<int, std::array<int, 4>>;

TermKey key_of(const Excitation& exc) { return {static_cast<int>(exc.kind), exc.idx}; }

// every term scheduled exactly as often as it occurs, every layer internally
// support-disjoint
void check_schedule(const Ansatz& ansatz) {
    const auto layers = schedule_layers(ansatz);
    std::map<TermKey, long> expected;
    for (const auto& block : ansatz.blocks)
        for (const auto& exc : block) expected[key_of(exc)] += 1;

    std::map<TermKey, long> scheduled;
    for (const auto& layer : layers) {
        std::set<int> used;
        for (const auto& exc : layer) {
            scheduled[key_of(exc)] += 1;
            for (const int orbital : excitation_support(exc))
                CHECK(used.insert(orbital).second);
        }
    }
    CHECK(scheduled == expected);
}

Ansatz synthetic(std::vector<std::vector<Excitation>> blocks, int n_spin_orbitals) {
    Ansatz ansatz;
    ansatz.kind = AnsatzKind::Uccgsd;
    ansatz.n_spin_orbitals = n_spin_orbitals;
    ansatz.n_alpha = 1;
    ansatz.n_beta = 1;
    ansatz.blocks = std::move(blocks);
    return ansatz;
}

} // namespace

TEST_CASE("frozen per-class counts") {
    auto est = count_resources(build_ansatz(AnsatzKind::Uccsd, 8, 2, 2));
    CHECK(est.singles == 8);
    CHECK(est.doubles == 18);
    CHECK(est.pair_doubles == 0);
    CHECK(est.term_count == 26);
    CHECK(est.layer_count == 0); // counting alone never schedules

    est = count_resources(build_ansatz(AnsatzKind::Uccgsd, 8, 2, 2));
    CHECK(est.singles == 12);
    CHECK(est.doubles == 150);
    CHECK(est.term_count == 162);

    est = count_resources(build_ansatz(AnsatzKind::KUpccgsd, 8, 2, 2, 2));
    CHECK(est.singles == 24);
    CHECK(est.pair_doubles == 12);
    CHECK(est.term_count == 36);
    CHECK(est.k == 2);
    CHECK(est.eta == 4);
    CHECK(est.n_spin_orbitals == 8);

    est = count_resources(build_ansatz(AnsatzKind::Upccsd, 8, 2, 2));
    CHECK(est.singles == 8);
    CHECK(est.pair_doubles == 4);
    CHECK(est.term_count == 12);
}

TEST_CASE("schedules cover every term once with disjoint supports") {
    for (const auto kind :
         {AnsatzKind::Uccsd, AnsatzKind::Uccgsd, AnsatzKind::Upccsd, AnsatzKind::KUpccgsd}) {
        const auto ansatz = build_ansatz(kind, 8, 2, 2, kind == AnsatzKind::KUpccgsd ? 3 : 1);
        check_schedule(ansatz);
        const auto est = estimate_resources(ansatz);
        CHECK(est.layer_count >= 1);
        CHECK(est.layer_count <= est.term_count);
        CHECK(est.layer_count == static_cast<long>(schedule_layers(ansatz).size()));
    }
}

TEST_CASE("identical blocks scale the schedule linearly in k") {
    const auto one = estimate_resources(build_ansatz(AnsatzKind::KUpccgsd, 8, 2, 2, 1));
    const auto three = estimate_resources(build_ansatz(AnsatzKind::KUpccgsd, 8, 2, 2, 3));
    CHECK(three.term_count == 3 * one.term_count);
    CHECK(three.layer_count == 3 * one.layer_count);
    CHECK(one.layer_count == 6); // pinned for the eight-orbital block
}

TEST_CASE("hand-sized schedules") {
    // one term occupies one layer
    const auto lone = synthetic({{Excitation::single(0, 2)}}, 8);
    CHECK(estimate_resources(lone).layer_count == 1);

    // sharing spin orbital 0 forces a second layer
    const auto clash = synthetic({{Excitation::single(0, 2), Excitation::single(0, 4)}}, 8);
    CHECK(estimate_resources(clash).layer_count == 2);

    // disjoint supports pack into a single layer
    const auto packed = synthetic({{Excitation::single(0, 2), Excitation::single(4, 6)}}, 8);
    CHECK(estimate_resources(packed).layer_count == 1);

    // all six spatial pairs over four sites: a 1-factorization of K4 needs
    // exactly three rounds
    std::vector<Excitation> k4;
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) k4.push_back(Excitation::pair_double(p, q));
    const auto paired = synthetic({k4}, 8);
    CHECK(estimate_resources(paired).layer_count == 3);
    check_schedule(paired);
}

TEST_CASE("greedy layer count never shrinks as terms are appended") {
    const auto full = build_ansatz(AnsatzKind::Uccsd, 8, 2, 2);
    long previous = 0;
    for (std::size_t m = 1; m <= full.blocks[0].size(); ++m) {
        auto prefix = full;
        prefix.blocks[0].resize(m);
        const long count = estimate_resources(prefix).layer_count;
        CHECK(count >= previous);
        previous = count;
    }
}

TEST_CASE("scaling report fits the expected growth exponents") {
    const std::vector<std::pair<int, int>> doubling = {{8, 4}, {16, 8}, {32, 16}};
    const auto kup = scaling_report(AnsatzKind::KUpccgsd, 1, doubling);
    REQUIRE(kup.rows.size() == 3);
    CHECK(kup.rows[0].term_count == 18);
    CHECK(kup.rows[1].term_count == 84);
    CHECK(kup.rows[2].term_count == 360);
    CHECK(kup.rows[0].layer_count == 6);
    // pair-product structure keeps the depth linear in the orbital count
    CHECK(kup.layer_exponent >= 0.7);
    CHECK(kup.layer_exponent <= 1.3);
    CHECK(kup.term_exponent >= 1.7);
    CHECK(kup.term_exponent <= 2.3);

    const std::vector<std::pair<int, int>> half_filled = {{8, 4}, {12, 6}, {16, 8}};
    const auto gsd = scaling_report(AnsatzKind::Uccgsd, 1, half_filled);
    CHECK(gsd.rows[0].term_count == 162);
    CHECK(gsd.rows[1].term_count == 870);
    CHECK(gsd.rows[2].term_count == 2828);
    CHECK(gsd.term_exponent >= 3.6);
    CHECK(gsd.term_exponent <= 4.4);

    // frozen electron count: the active-excitation count grows like the
    // square of the virtual space, visible against ln(N - eta)
    const std::vector<std::pair<int, int>> fixed_eta = {{8, 4}, {12, 4}, {16, 4}};
    const auto ucc = scaling_report(AnsatzKind::Uccsd, 1, fixed_eta);
    CHECK(ucc.rows[0].term_count == 26);
    CHECK(ucc.rows[1].term_count == 92);
    CHECK(ucc.rows[2].term_count == 198);
    std::vector<double> log_virtual, log_terms;
    for (const auto& row : ucc.rows) {
        log_virtual.push_back(std::log(static_cast<double>(row.n_spin_orbitals - row.eta)));
        log_terms.push_back(std::log(static_cast<double>(row.term_count)));
    }
    const double slope = ols_slope(log_virtual, log_terms);
    CHECK(std::abs(slope - 2.0) <= 0.4);
}

TEST_CASE("scaling report validates its inputs") {
    const std::vector<std::pair<int, int>> single = {{8, 4}};
    CHECK_THROWS_AS(scaling_report(AnsatzKind::Uccsd, 1, single), std::invalid_argument);
    const std::vector<std::pair<int, int>> zero_eta = {{8, 0}, {12, 0}};
    CHECK_THROWS_AS(scaling_report(AnsatzKind::Uccsd, 1, zero_eta), std::invalid_argument);
    // fully occupied: no virtual space, nothing to excite into
    const std::vector<std::pair<int, int>> full = {{4, 4}, {8, 8}};
    CHECK_THROWS_AS(scaling_report(AnsatzKind::Uccsd, 1, full), std::invalid_argument);
}

TEST_CASE("scaling csv is stable") {
    const std::vector<std::pair<int, int>> sizes = {{4, 2}, {8, 4}};
    const auto report = scaling_report(AnsatzKind::KUpccgsd, 2, sizes);
    std::ostringstream out;
    write_scaling_csv(report, out);
    CHECK(out.str() ==
          "kind,k,N,eta,terms_singles,terms_doubles,terms_pair,term_count,layer_count\n"
          "kupccgsd,2,4,2,4,0,2,6,4\n"
          "kupccgsd,2,8,4,24,0,12,36,12\n");
}

TEST_CASE("least-squares slope") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (const double v : x) y.push_back(3.0 * v + 1.0);
    CHECK(std::abs(ols_slope(x, y) - 3.0) <= 1e-12);

    const std::vector<double> noisy_x = {0.0, 1.0};
    const std::vector<double> noisy_y = {0.5, -0.5};
    CHECK(std::abs(ols_slope(noisy_x, noisy_y) + 1.0) <= 1e-12);

    CHECK_THROWS_AS(ols_slope(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ols_slope(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument); // degenerate abscissa
    CHECK_THROWS_AS(ols_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
}
