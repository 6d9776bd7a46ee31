// Acceptance gate: one pass/fail line per shipped criterion, each with its
// tolerance pinned in code and its wall-clock budget enforced. Exit status is
// zero exactly when no criterion fails (honest skips are allowed for the
// stretch criterion, which needs externally generated integral files).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "uccvqe/ansatz.hpp"
#include "uccvqe/excited.hpp"
#include "uccvqe/fock.hpp"
#include "uccvqe/hamiltonian.hpp"
#include "uccvqe/oracle.hpp"
#include "uccvqe/resources.hpp"
#include "uccvqe/util.hpp"
#include "uccvqe/vqe.hpp"

using namespace uccvqe;
using testutil::choose;

namespace {

struct CriterionResult {
    enum class Status { Pass, Fail, Skip } status = Status::Fail;
    std::string detail;

    static CriterionResult pass(std::string detail = "") {
        return {Status::Pass, std::move(detail)};
    }
    static CriterionResult fail(std::string detail) { return {Status::Fail, std::move(detail)}; }
    static CriterionResult skip(std::string detail) { return {Status::Skip, std::move(detail)}; }
};

VqeProblem hubbard_problem(int sites, double u, AnsatzKind kind, int k = 1) {
    const auto h = hubbard_hamiltonian(sites, 1.0, u);
    auto basis = make_sector_basis(h.n_spin_orbitals(), h.default_n_alpha(), h.default_n_beta());
    return VqeProblem(sector_matrix(h, *basis),
                      build_ansatz(kind, h.n_spin_orbitals(), h.default_n_alpha(),
                                   h.default_n_beta(), k),
                      aufbau_reference(h.n_spin_orbitals(), h.default_n_alpha(),
                                       h.default_n_beta()),
                      basis);
}

std::string format_detail(const char* fmt, double a, double b = 0.0) {
    char buffer[160];
    std::snprintf(buffer, sizeof buffer, fmt, a, b);
    return buffer;
}

// criterion 1: UCCSD reproduces the analytic two-electron ground state
CriterionResult two_electron_exactness() {
    const auto problem = hubbard_problem(2, 4.0, AnsatzKind::Uccsd);
    const VqeResult result = minimize_multistart(problem, 5, 1, 0.1);
    const double exact = 2.0 - std::sqrt(8.0);
    const double error = std::abs(result.energy - exact);
    if (!result.converged) return CriterionResult::fail("optimizer did not converge");
    if (error > 1e-8) return CriterionResult::fail(format_detail("|E - exact| = %.3e", error));
    return CriterionResult::pass(format_detail("|E - exact| = %.1e <= 1e-8", error));
}

// criterion 2: no ansatz state ever undercuts the variational floor
CriterionResult variationality_suite() {
    const auto h = hubbard_hamiltonian(4, 1.0, 4.0);
    auto basis = make_sector_basis(8, 2, 2);
    const Eigen::MatrixXd m = sector_matrix(h, *basis);
    const double floor = fci_lowest(m, 1)[0].value - 1e-10;
    const auto ref = aufbau_reference(8, 2, 2);

    std::mt19937_64 gen(7777);
    long cases = 0;
    double worst_margin = 1e300;
    for (const auto kind :
         {AnsatzKind::Uccsd, AnsatzKind::Uccgsd, AnsatzKind::Upccsd, AnsatzKind::KUpccgsd}) {
        const VqeProblem problem(
            m, build_ansatz(kind, 8, 2, 2, kind == AnsatzKind::KUpccgsd ? 2 : 1), ref, basis);
        for (int trial = 0; trial < 250; ++trial) {
            const double scale = trial % 2 == 0 ? 0.5 : 2.0;
            const double value =
                objective(problem, testutil::random_params(problem.n_params(), scale, gen));
            worst_margin = std::min(worst_margin, value - floor);
            ++cases;
        }
    }
    if (worst_margin < 0.0)
        return CriterionResult::fail(format_detail("floor undercut by %.3e", -worst_margin));
    return CriterionResult::pass(
        format_detail("%.0f random states, min margin %.2e", static_cast<double>(cases),
                      worst_margin));
}

// criterion 3: deeper warm-started products never lose energy and reach FCI
CriterionResult monotone_k() {
    const double fci = [] {
        const auto h = hubbard_hamiltonian(4, 1.0, 4.0);
        auto basis = make_sector_basis(8, 2, 2);
        return fci_lowest(sector_matrix(h, *basis), 1)[0].value;
    }();
    if (std::abs(fci - (-1.953145308684547)) > 1e-9)
        return CriterionResult::fail("FCI reference drifted from the frozen value");

    const int restarts[3] = {20, 10, 6};
    std::vector<double> energies;
    Eigen::VectorXd previous;
    for (int k = 1; k <= 3; ++k) {
        const auto problem = hubbard_problem(4, 4.0, AnsatzKind::KUpccgsd, k);
        MinimizeOptions options;
        options.restarts = restarts[k - 1];
        options.seed = 7;
        if (k > 1) {
            Eigen::VectorXd padded = Eigen::VectorXd::Zero(problem.n_params());
            padded.head(previous.size()) = previous;
            options.extra_starts = {padded};
        }
        const VqeResult result = minimize_multistart(problem, options);
        energies.push_back(result.energy);
        previous = result.params;
    }
    for (int k = 1; k < 3; ++k)
        if (energies[k] - energies[k - 1] > 1e-12)
            return CriterionResult::fail(
                format_detail("E(k) rose by %.3e at k=%g", energies[k] - energies[k - 1],
                              static_cast<double>(k + 1)));
    const double final_meh = (energies[2] - fci) * 1000.0;
    if (std::abs(final_meh) > 1.0)
        return CriterionResult::fail(format_detail("E(3) off FCI by %.3f mEh", final_meh));
    return CriterionResult::pass(
        format_detail("E(1..3) monotone, E(3) - FCI = %.2e mEh", final_meh));
}

// criterion 4: ground-state contamination moves the deflated level as eps^2
CriterionResult epsilon_squared() {
    const auto h = hubbard_hamiltonian(4, 1.0, 4.0);
    auto basis = make_sector_basis(8, 2, 2);
    const Eigen::MatrixXd m = sector_matrix(h, *basis);
    const auto pairs = fci_lowest(m, 2);
    if (!(pairs[1].value < 0.0))
        return CriterionResult::fail("model lost its bound excited state");
    const StateVector ground{basis, pairs[0].vector};
    const std::vector<double> epsilons = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

    std::mt19937_64 gen(4242);
    double lo = 1e300, hi = -1e300;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd perp = testutil::random_unit_vector(static_cast<int>(basis->size()), gen);
        perp -= perp.dot(pairs[0].vector) * pairs[0].vector;
        perp.normalize();
        const double slope = epsilon_scaling_study(m, ground, StateVector{basis, perp}, epsilons);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
        if (slope < 1.8 || slope > 2.2)
            return CriterionResult::fail(format_detail("slope %.3f outside [1.8, 2.2]", slope));
    }
    return CriterionResult::pass(format_detail("3 slopes within [%.3f, %.3f]", lo, hi));
}

// criterion 5: a generously shifted excited solve is exact on the model
CriterionResult oc_vqe_exactness() {
    const auto h = hubbard_hamiltonian(2, 1.0, 4.0);
    auto basis = make_sector_basis(4, 1, 1);
    const Eigen::MatrixXd m = sector_matrix(h, *basis);
    const auto pairs = fci_lowest(m, 2);
    const std::vector<std::pair<int, int>> promotions = {{0, 1}};
    const auto config = make_oc_config(StateVector{basis, pairs[0].vector}, pairs[0].value, 10.0,
                                       singly_excited_reference(4, 1, 1, promotions),
                                       build_ansatz(AnsatzKind::Uccgsd, 4, 1, 1));
    MinimizeOptions options;
    options.restarts = 6;
    options.seed = 4;
    const ExcitedResult result = solve_excited(m, config, basis, options);
    const double error = std::abs(result.vqe.energy - 0.0);
    if (!result.vqe.converged) return CriterionResult::fail("excited solve did not converge");
    if (result.flagged) return CriterionResult::fail("residual ground-state overlap flagged");
    if (error > 1e-6) return CriterionResult::fail(format_detail("|E1| = %.3e > 1e-6", error));
    return CriterionResult::pass(format_detail("|E1 - 0| = %.1e <= 1e-6", error));
}

bool schedule_is_valid(const Ansatz& ansatz) {
    const auto layers = schedule_layers(ansatz);
    long scheduled = 0;
    for (const auto& layer : layers) {
        std::vector<int> used;
        for (const auto& exc : layer) {
            for (const int orbital : excitation_support(exc)) {
                if (std::find(used.begin(), used.end(), orbital) != used.end()) return false;
                used.push_back(orbital);
            }
            ++scheduled;
        }
    }
    long total = 0;
    for (const auto& block : ansatz.blocks) total += static_cast<long>(block.size());
    return scheduled == total;
}

// criterion 6: fitted growth exponents and schedule validity
CriterionResult resource_scaling() {
    const std::vector<std::pair<int, int>> doubling = {{8, 4}, {16, 8}, {32, 16}};
    const auto kup = scaling_report(AnsatzKind::KUpccgsd, 1, doubling);
    if (std::abs(kup.layer_exponent - 1.0) > 0.3)
        return CriterionResult::fail(
            format_detail("pair-product layer exponent %.3f outside 1.0 +- 0.3",
                          kup.layer_exponent));

    const std::vector<std::pair<int, int>> half_filled = {{8, 4}, {12, 6}, {16, 8}};
    const auto gsd = scaling_report(AnsatzKind::Uccgsd, 1, half_filled);
    if (std::abs(gsd.term_exponent - 4.0) > 0.4)
        return CriterionResult::fail(
            format_detail("generalized term exponent %.3f outside 4.0 +- 0.4",
                          gsd.term_exponent));

    // frozen electron count: term growth follows the squared virtual space
    const std::vector<std::pair<int, int>> fixed_eta = {{8, 4}, {12, 4}, {16, 4}};
    const auto ucc = scaling_report(AnsatzKind::Uccsd, 1, fixed_eta);
    std::vector<double> log_virtual, log_terms;
    for (const auto& row : ucc.rows) {
        log_virtual.push_back(std::log(static_cast<double>(row.n_spin_orbitals - row.eta)));
        log_terms.push_back(std::log(static_cast<double>(row.term_count)));
    }
    const double ucc_slope = ols_slope(log_virtual, log_terms);
    if (std::abs(ucc_slope - 2.0) > 0.4)
        return CriterionResult::fail(
            format_detail("frozen-eta exponent %.3f outside 2.0 +- 0.4", ucc_slope));

    for (const auto& sizes : {doubling, half_filled, fixed_eta})
        for (const auto& [n, eta] : sizes) {
            const int na = (eta + 1) / 2;
            const int nb = eta / 2;
            for (const auto kind :
                 {AnsatzKind::Uccsd, AnsatzKind::Uccgsd, AnsatzKind::Upccsd,
                  AnsatzKind::KUpccgsd})
                if (!schedule_is_valid(build_ansatz(kind, n, na, nb, 1)))
                    return CriterionResult::fail("an emitted schedule broke disjoint support");
        }
    return CriterionResult::pass(format_detail(
        "layer exp %.2f, term exp %.2f, all schedules valid", kup.layer_exponent,
        gsd.term_exponent));
}

// independent brute-force enumerators for criterion 7 (masks and index scans,
// sharing no code with build_ansatz)
long enumerate_uccsd(int n, int na, int nb) {
    std::vector<int> occ, virt;
    for (int s = 0; s < n; ++s) {
        const bool occupied = (s % 2 == 0) ? (s / 2 < na) : (s / 2 < nb);
        (occupied ? occ : virt).push_back(s);
    }
    long singles = 0;
    for (const int i : occ)
        for (const int a : virt)
            if (i % 2 == a % 2) ++singles;
    long doubles = 0;
    for (std::size_t x = 0; x < occ.size(); ++x)
        for (std::size_t y = x + 1; y < occ.size(); ++y)
            for (std::size_t u = 0; u < virt.size(); ++u)
                for (std::size_t v = u + 1; v < virt.size(); ++v) {
                    const int si = occ[x] % 2 + occ[y] % 2;
                    const int sa = virt[u] % 2 + virt[v] % 2;
                    if (si == sa) ++doubles;
                }
    return singles + doubles;
}

long enumerate_uccgsd(int n) {
    long singles = 0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (p % 2 == q % 2) ++singles;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    long doubles = 0;
    for (std::size_t x = 0; x < pairs.size(); ++x)
        for (std::size_t y = x + 1; y < pairs.size(); ++y) {
            const int sx = pairs[x].first % 2 + pairs[x].second % 2;
            const int sy = pairs[y].first % 2 + pairs[y].second % 2;
            if (sx == sy) ++doubles;
        }
    return singles + doubles;
}

long enumerate_kupccgsd(int n, int k) {
    long singles = 0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (p % 2 == q % 2) ++singles;
    const int m = n / 2;
    return k * (singles + static_cast<long>(m) * (m - 1) / 2);
}

// criterion 7: frozen amplitude counts against the independent enumerators
CriterionResult amplitude_counts() {
    const long uccsd = build_ansatz(AnsatzKind::Uccsd, 8, 2, 2).n_params();
    const long uccgsd = build_ansatz(AnsatzKind::Uccgsd, 8, 2, 2).n_params();
    const long kup2 = build_ansatz(AnsatzKind::KUpccgsd, 8, 2, 2, 2).n_params();
    if (uccsd != 26 || uccsd != enumerate_uccsd(8, 2, 2))
        return CriterionResult::fail(format_detail("UCCSD count %g != 26", double(uccsd)));
    if (uccgsd != 162 || uccgsd != enumerate_uccgsd(8))
        return CriterionResult::fail(format_detail("UCCGSD count %g != 162", double(uccgsd)));
    if (kup2 != 36 || kup2 != enumerate_kupccgsd(8, 2))
        return CriterionResult::fail(format_detail("2-UpCCGSD count %g != 36", double(kup2)));
    return CriterionResult::pass("26 / 162 / 36 confirmed by brute-force enumeration");
}

// criterion 8 support: solve one externally supplied integral file
struct PointResult {
    double error_meh = 0.0;
    bool converged = false;
};

PointResult solve_point(const std::string& path, AnsatzKind kind, int k) {
    const auto h = parse_fcidump_file(path);
    auto basis = make_sector_basis(h.n_spin_orbitals(), h.default_n_alpha(), h.default_n_beta());
    VqeProblem problem(sector_matrix(h, *basis),
                       build_ansatz(kind, h.n_spin_orbitals(), h.default_n_alpha(),
                                    h.default_n_beta(), k),
                       aufbau_reference(h.n_spin_orbitals(), h.default_n_alpha(),
                                        h.default_n_beta()),
                       basis);
    const VqeResult result = minimize_multistart(problem, 8, 3, 0.1);
    const double fci = fci_lowest(problem.hamiltonian_matrix(), 1)[0].value;
    return {(result.energy - fci) * 1000.0, result.converged};
}

std::vector<std::string> sorted_fcidumps(const std::filesystem::path& dir) {
    std::vector<std::string> files;
    if (!std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".fcidump") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

std::optional<double> curve_npe(const std::vector<std::string>& files, AnsatzKind kind, int k) {
    std::vector<double> errors;
    for (const auto& file : files) {
        const PointResult point = solve_point(file, kind, k);
        if (!point.converged) return std::nullopt;
        errors.push_back(point.error_meh);
    }
    return npe(errors);
}

// criterion 8 (stretch): reproduce the molecular benchmarks when integral
// files are supplied. Expected layout under $UCCVQE_MOLECULAR_DATA:
//   h4/*.fcidump           four-hydrogen curve, one file per geometry
//   n2/*.fcidump           nitrogen dimer curve, frozen-core integrals
//   n2_excited/*.fcidump   three geometries ordered by increasing bond length
CriterionResult molecular_benchmarks() {
    const char* root = std::getenv("UCCVQE_MOLECULAR_DATA");
    if (root == nullptr)
        return CriterionResult::skip(
            "externally generated integrals required; set UCCVQE_MOLECULAR_DATA to run");
    const std::filesystem::path base(root);

    const auto h4 = sorted_fcidumps(base / "h4");
    if (h4.size() < 2)
        return CriterionResult::skip("no four-hydrogen curve under " + (base / "h4").string());
    const auto gsd_npe = curve_npe(h4, AnsatzKind::Uccgsd, 1);
    if (!gsd_npe) return CriterionResult::fail("a generalized-ansatz point did not converge");
    if (*gsd_npe > 0.5)
        return CriterionResult::fail(format_detail("UCCGSD NPE %.3f mEh > 0.5", *gsd_npe));
    const auto kup_npe = curve_npe(h4, AnsatzKind::KUpccgsd, 2);
    if (!kup_npe) return CriterionResult::fail("a pair-product point did not converge");
    if (*kup_npe > 0.5)
        return CriterionResult::fail(format_detail("2-UpCCGSD NPE %.3f mEh > 0.5", *kup_npe));

    const auto n2 = sorted_fcidumps(base / "n2");
    if (n2.size() < 2)
        return CriterionResult::skip("no nitrogen curve under " + (base / "n2").string());
    const auto n2_npe = curve_npe(n2, AnsatzKind::Uccgsd, 1);
    if (!n2_npe) return CriterionResult::fail("a nitrogen point did not converge");
    if (std::abs(*n2_npe - 1.33) > 0.5)
        return CriterionResult::fail(
            format_detail("nitrogen UCCGSD NPE %.3f mEh outside 1.33 +- 0.5", *n2_npe));

    const auto excited_files = sorted_fcidumps(base / "n2_excited");
    if (excited_files.size() != 3)
        return CriterionResult::skip("expected exactly three files under " +
                                     (base / "n2_excited").string());
    std::vector<double> excited_errors;
    for (const auto& file : excited_files) {
        const auto h = parse_fcidump_file(file);
        auto basis =
            make_sector_basis(h.n_spin_orbitals(), h.default_n_alpha(), h.default_n_beta());
        const Eigen::MatrixXd m = sector_matrix(h, *basis);
        const auto levels = fci_lowest(m, 2);
        const auto ansatz = build_ansatz(AnsatzKind::Uccgsd, h.n_spin_orbitals(),
                                         h.default_n_alpha(), h.default_n_beta());
        VqeProblem ground_problem(
            m, ansatz,
            aufbau_reference(h.n_spin_orbitals(), h.default_n_alpha(), h.default_n_beta()),
            basis);
        const VqeResult ground = minimize_multistart(ground_problem, 8, 3, 0.1);
        if (!ground.converged) return CriterionResult::fail("a ground solve did not converge");
        // spin-paired promotion across the reference gap
        const std::vector<std::pair<int, int>> promotions = {
            {h.default_n_beta() - 1, std::max(h.default_n_alpha(), h.default_n_beta())}};
        const auto config = make_oc_config(
            StateVector{basis, ground_problem.state(ground.params).amplitudes}, ground.energy,
            std::nullopt,
            singly_excited_reference(h.n_spin_orbitals(), h.default_n_alpha(),
                                     h.default_n_beta(), promotions),
            ansatz);
        MinimizeOptions options;
        options.restarts = 8;
        options.seed = 3;
        const ExcitedResult excited = solve_excited(m, config, basis, options);
        if (!excited.vqe.converged)
            return CriterionResult::fail("an excited solve did not converge");
        excited_errors.push_back(std::abs((excited.vqe.energy - levels[1].value) * 1000.0));
    }
    if (!(excited_errors[0] > excited_errors[1] && excited_errors[1] > excited_errors[2]))
        return CriterionResult::fail(
            format_detail("excited errors %.2f / %.2f not strictly decreasing",
                          excited_errors[0], excited_errors[1]));
    return CriterionResult::pass("molecular curves reproduced from supplied integrals");
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<CriterionResult()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"two-electron exactness (UCCSD, two-site chain)", 1.0, two_electron_exactness},
        {"variationality over 1000 random states", 30.0, variationality_suite},
        {"monotone warm-started k-UpCCGSD energies", 300.0, monotone_k},
        {"eps^2 sensitivity of the deflated excited level", 60.0, epsilon_squared},
        {"orthogonality-constrained excited exactness", 10.0, oc_vqe_exactness},
        {"resource-scaling exponents and schedule validity", 10.0, resource_scaling},
        {"frozen amplitude counts", 1.0, amplitude_counts},
        {"molecular benchmarks from external integrals", 600.0, molecular_benchmarks},
    };

    bool any_failed = false;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = criteria[i].run();
        } catch (const std::exception& e) {
            result = CriterionResult::fail(std::string("unexpected exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (result.status == CriterionResult::Status::Pass &&
            elapsed > criteria[i].budget_seconds) {
            result = CriterionResult::fail(
                format_detail("exceeded the %.0f s budget (took %.1f s)",
                              criteria[i].budget_seconds, elapsed));
        }
        const char* tag = result.status == CriterionResult::Status::Pass   ? "PASS"
                          : result.status == CriterionResult::Status::Skip ? "SKIP"
                                                                           : "FAIL";
        std::printf("%s criterion %zu: %s", tag, i + 1, criteria[i].name);
        if (!result.detail.empty()) std::printf(" [%s]", result.detail.c_str());
        std::printf(" (%.2f s)\n", elapsed);
        if (result.status == CriterionResult::Status::Fail) any_failed = true;
    }
    return any_failed ? 1 : 0;
}
