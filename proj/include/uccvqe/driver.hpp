#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "uccvqe/ansatz.hpp"
#include "uccvqe/excited.hpp"
#include "uccvqe/hamiltonian.hpp"
#include "uccvqe/resources.hpp"

namespace uccvqe {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Process exit codes shared by the CLI and the driver tests.
enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitNotConverged = 2,
    kExitMuInvalid = 3,
};

struct HamiltonianSource {
    std::optional<std::string> fcidump_path;
    std::optional<std::string> model; // builtin: "hubbard"
    int sites = 2;
    double t = 1.0;
    double u = 4.0;
};

// One run's full configuration. Every field maps 1:1 to a CLI flag and to a
// config-file key of the same name.
struct RunConfig {
    HamiltonianSource source;
    std::optional<int> n_alpha; // sector override; default from NELEC/MS2
    std::optional<int> n_beta;
    AnsatzKind ansatz = AnsatzKind::Uccsd;
    int k = 1;
    int restarts = 50;
    std::uint64_t seed = 1;
    double init_scale = 0.1;
    int max_iterations = 500;
    int jobs = 1;
    std::optional<double> mu_override;
    // spatial promotions "i>a;j>b" for the excited reference; empty = aufbau
    std::vector<std::pair<int, int>> reference_promotions;
    std::optional<std::string> out_path;
};

std::vector<std::pair<int, int>> parse_promotions(const std::string& text);

struct RunOutcome {
    int exit_code = kExitOk;
    Json report;
};

// Ground-state pipeline: load Hamiltonian, build sector/ansatz, multi-start
// VQE, FCI comparison, resource estimate, JSON report. Writes the report to
// config.out_path when set. Throws MuValidationError / std::exception for
// hard input errors; soft non-convergence is exit_code 2 with a full report.
RunOutcome run_ground(const RunConfig& config);

// Ground pipeline followed by the orthogonality-constrained excited solve.
// The report carries both solves, the shift, the residual ground-state
// overlap, and the doubled state-preparation depth for overlap measurement.
RunOutcome run_excited(const RunConfig& config);

struct ScanManifest {
    struct Entry {
        std::string label;
        HamiltonianSource source;
    };
    std::vector<Entry> entries;
    RunConfig shared; // applied to every entry (its source field is ignored)
    bool excited = false;
};

// Manifest text: one entry per line, "label path" or
// "label hubbard <sites> <t> <u>", '#' comments and blank lines skipped.
ScanManifest parse_scan_manifest(std::istream& in, RunConfig shared, bool excited);
ScanManifest parse_scan_manifest_file(const std::string& path, RunConfig shared, bool excited);

struct ScanOutcome {
    int exit_code = kExitOk;
    std::string csv;
    Json summary;
};

// Runs every manifest entry (concurrently up to shared.jobs), emits the error
// curve as CSV rows in manifest order plus a JSON summary with the NPE over
// converged points. Soft non-convergence flags the row and continues (exit
// 2); hard errors abort with the underlying exception (exit 1 at the CLI).
// With out_path set, writes <out>.csv and <out>.json.
ScanOutcome run_scan(const ScanManifest& manifest);

struct ResourceRequest {
    AnsatzKind kind = AnsatzKind::Uccsd;
    int k = 1;
    std::vector<std::pair<int, int>> sizes; // (N, eta)
    std::optional<std::string> out_path;
};

// Scaling table + fitted exponents; CSV written to out_path when set.
RunOutcome run_resources(const ResourceRequest& request);

// "N:eta,N:eta,..." -> size list
std::vector<std::pair<int, int>> parse_sizes(const std::string& text);

} // namespace uccvqe
