#include "uccvqe/driver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "uccvqe/fock.hpp"
#include "uccvqe/oracle.hpp"
#include "uccvqe/util.hpp"
#include "uccvqe/vqe.hpp"

namespace uccvqe {

namespace {

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("driver: cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("driver: failed while writing '" + path + "'");
}

std::string trim(const std::string& text) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

int parse_int_token(const std::string& token, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int value = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": bad integer '" + token + "'");
    }
}

double parse_real_token(const std::string& token, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": bad number '" + token + "'");
    }
}

MolecularHamiltonian load_hamiltonian(const HamiltonianSource& source) {
    if (source.fcidump_path.has_value() == source.model.has_value())
        throw std::invalid_argument(
            "driver: exactly one Hamiltonian source required (fcidump path or builtin model)");
    if (source.fcidump_path) return parse_fcidump_file(*source.fcidump_path);
    if (*source.model != "hubbard")
        throw std::invalid_argument("driver: unknown builtin model '" + *source.model + "'");
    return hubbard_hamiltonian(source.sites, source.t, source.u);
}

MinimizeOptions options_from(const RunConfig& config) {
    MinimizeOptions options;
    options.restarts = config.restarts;
    options.seed = config.seed;
    options.init_scale = config.init_scale;
    options.max_iterations = config.max_iterations;
    options.jobs = config.jobs;
    return options;
}

// Everything run_ground computes, kept around so run_excited and run_scan can
// build on the same pipeline without re-deriving intermediates.
struct GroundRun {
    MolecularHamiltonian h;
    SectorBasisPtr basis;
    Ansatz ansatz;
    Eigen::MatrixXd matrix;
    MultiDetReference reference;
    VqeResult vqe;
    std::vector<EigenPair> fci;
    ResourceEstimate resources;
    Eigen::VectorXd ground_amplitudes;
};

GroundRun execute_ground(const RunConfig& config, int fci_states) {
    GroundRun run{load_hamiltonian(config.source)};
    const int n_alpha = config.n_alpha.value_or(run.h.default_n_alpha());
    const int n_beta = config.n_beta.value_or(run.h.default_n_beta());
    run.basis = make_sector_basis(run.h.n_spin_orbitals(), n_alpha, n_beta);
    run.ansatz = build_ansatz(config.ansatz, run.h.n_spin_orbitals(), n_alpha, n_beta, config.k);
    run.matrix = sector_matrix(run.h, *run.basis);
    run.reference = aufbau_reference(run.h.n_spin_orbitals(), n_alpha, n_beta);
    VqeProblem problem(run.matrix, run.ansatz, run.reference, run.basis);
    run.vqe = minimize_multistart(problem, options_from(config));
    run.ground_amplitudes = problem.preparer().prepare(run.vqe.params);
    run.fci = fci_lowest(run.matrix, std::min<int>(fci_states, static_cast<int>(run.basis->size())));
    run.resources = estimate_resources(run.ansatz);
    return run;
}

struct ExcitedRun {
    ExcitedResult result;
    MultiDetReference reference;
    EigenPair fci_excited;
};

ExcitedRun execute_excited(const RunConfig& config, const GroundRun& ground) {
    if (ground.basis->size() < 2)
        throw std::invalid_argument("excited: sector of dimension 1 has no excited state");
    ExcitedRun run;
    run.reference =
        config.reference_promotions.empty()
            ? aufbau_reference(ground.h.n_spin_orbitals(), ground.basis->n_alpha(),
                               ground.basis->n_beta())
            : singly_excited_reference(ground.h.n_spin_orbitals(), ground.basis->n_alpha(),
                                       ground.basis->n_beta(), config.reference_promotions);
    const StateVector ground_state{ground.basis, ground.ground_amplitudes};
    const OcVqeConfig oc = make_oc_config(ground_state, ground.vqe.energy, config.mu_override,
                                          run.reference, ground.ansatz);
    run.result = solve_excited(ground.matrix, oc, ground.basis, options_from(config));
    run.fci_excited = ground.fci.at(1);
    return run;
}

Json source_json(const HamiltonianSource& source, const MolecularHamiltonian& h) {
    Json j;
    if (source.fcidump_path) {
        j["source"] = "fcidump";
        j["path"] = *source.fcidump_path;
    } else {
        j["source"] = "model";
        j["model"] = *source.model;
        j["sites"] = source.sites;
        j["t"] = source.t;
        j["u"] = source.u;
    }
    j["n_spatial"] = h.n_spatial;
    j["n_electrons"] = h.n_electrons;
    j["ms2"] = h.ms2;
    j["core_energy"] = h.core_energy;
    return j;
}

Json sector_json(const SectorBasis& basis) {
    Json j;
    j["n_spin_orbitals"] = basis.n_spin_orbitals();
    j["n_alpha"] = basis.n_alpha();
    j["n_beta"] = basis.n_beta();
    j["dimension"] = basis.size();
    return j;
}

Json ansatz_json(const Ansatz& ansatz) {
    Json j;
    j["kind"] = to_string(ansatz.kind);
    j["k"] = ansatz.k;
    j["n_params"] = ansatz.n_params();
    j["n_blocks"] = ansatz.n_blocks();
    return j;
}

Json optimizer_json(const MinimizeOptions& options) {
    Json j;
    j["restarts"] = options.restarts;
    j["seed"] = options.seed;
    j["init_scale"] = options.init_scale;
    j["max_iterations"] = options.max_iterations;
    j["gradient_tolerance"] = options.gradient_tolerance;
    j["energy_tolerance"] = options.energy_tolerance;
    j["jobs"] = options.jobs;
    return j;
}

Json vqe_json(const VqeResult& result) {
    Json j;
    j["energy"] = result.energy;
    j["gradient_norm"] = result.gradient_norm;
    j["converged"] = result.converged;
    j["restart_index"] = result.restart_index;
    j["restart_energies"] = result.restart_energies;
    Json params = Json::array();
    for (Eigen::Index i = 0; i < result.params.size(); ++i) params.push_back(result.params[i]);
    j["params"] = params;
    return j;
}

Json fci_json(const EigenPair& level) {
    Json j;
    j["energy"] = level.value;
    j["degenerate"] = level.degenerate;
    return j;
}

Json resources_json(const ResourceEstimate& est) {
    Json j;
    j["singles"] = est.singles;
    j["doubles"] = est.doubles;
    j["pair_doubles"] = est.pair_doubles;
    j["term_count"] = est.term_count;
    j["layer_count"] = est.layer_count;
    return j;
}

Json ground_report(const RunConfig& config, const GroundRun& run, const char* run_kind) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["run"] = run_kind;
    j["timestamp"] = timestamp_utc();
    j["hamiltonian"] = source_json(config.source, run.h);
    j["sector"] = sector_json(*run.basis);
    j["ansatz"] = ansatz_json(run.ansatz);
    j["optimizer"] = optimizer_json(options_from(config));
    j["vqe"] = vqe_json(run.vqe);
    j["fci"] = fci_json(run.fci.at(0));
    j["error_meh"] = (run.vqe.energy - run.fci.at(0).value) * 1000.0;
    j["resources"] = resources_json(run.resources);
    return j;
}

Json excited_json(const RunConfig& config, const ExcitedRun& run, const ResourceEstimate& res) {
    Json j;
    j["mu"] = run.result.mu;
    j["mu_rule"] = config.mu_override ? "override" : "negated-ground-energy";
    Json ref;
    if (config.reference_promotions.empty()) {
        ref["kind"] = "aufbau";
    } else {
        ref["kind"] = "singly-excited";
        Json promotions = Json::array();
        for (const auto& [from, to] : config.reference_promotions)
            promotions.push_back(Json::array({from, to}));
        ref["promotions"] = promotions;
    }
    j["reference"] = ref;
    j["vqe"] = vqe_json(run.result.vqe);
    j["penalized_energy"] = run.result.penalized_energy;
    j["residual_overlap_sq"] = run.result.residual_overlap_sq;
    j["flagged"] = run.result.flagged;
    j["fci"] = fci_json(run.fci_excited);
    j["error_meh"] = (run.result.vqe.energy - run.fci_excited.value) * 1000.0;
    // overlap estimation against the stored ground state doubles the prepared
    // circuit, so its depth proxy is twice the preparation layer count
    j["overlap_measurement_depth"] = 2 * res.layer_count;
    return j;
}

void maybe_write_report(const std::optional<std::string>& path, const Json& report) {
    if (path) write_text_file(*path, report.dump(2) + "\n");
}

} // namespace

std::vector<std::pair<int, int>> parse_promotions(const std::string& text) {
    std::vector<std::pair<int, int>> promotions;
    std::stringstream segments(text);
    std::string segment;
    while (std::getline(segments, segment, ';')) {
        segment = trim(segment);
        if (segment.empty()) continue;
        const auto sep = segment.find('>');
        if (sep == std::string::npos)
            throw std::invalid_argument("reference: expected 'i>a' promotion, got '" + segment +
                                        "'");
        const int from = parse_int_token(trim(segment.substr(0, sep)), "reference promotion");
        const int to = parse_int_token(trim(segment.substr(sep + 1)), "reference promotion");
        if (from < 0 || to < 0)
            throw std::invalid_argument("reference: negative spatial orbital in '" + segment + "'");
        promotions.emplace_back(from, to);
    }
    return promotions;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
    std::vector<std::pair<int, int>> sizes;
    std::stringstream segments(text);
    std::string segment;
    while (std::getline(segments, segment, ',')) {
        segment = trim(segment);
        if (segment.empty()) continue;
        const auto sep = segment.find(':');
        if (sep == std::string::npos)
            throw std::invalid_argument("sizes: expected 'N:eta', got '" + segment + "'");
        const int n = parse_int_token(trim(segment.substr(0, sep)), "sizes");
        const int eta = parse_int_token(trim(segment.substr(sep + 1)), "sizes");
        if (n <= 0 || eta <= 0)
            throw std::invalid_argument("sizes: counts must be positive in '" + segment + "'");
        sizes.emplace_back(n, eta);
    }
    if (sizes.empty()) throw std::invalid_argument("sizes: empty size list");
    return sizes;
}

RunOutcome run_ground(const RunConfig& config) {
    const GroundRun run = execute_ground(config, 2);
    RunOutcome outcome;
    outcome.report = ground_report(config, run, "ground");
    outcome.exit_code = run.vqe.converged ? kExitOk : kExitNotConverged;
    maybe_write_report(config.out_path, outcome.report);
    return outcome;
}

RunOutcome run_excited(const RunConfig& config) {
    const GroundRun ground = execute_ground(config, 3);
    const ExcitedRun excited = execute_excited(config, ground);
    RunOutcome outcome;
    outcome.report = ground_report(config, ground, "excited");
    outcome.report["excited"] = excited_json(config, excited, ground.resources);
    outcome.exit_code = ground.vqe.converged && excited.result.vqe.converged ? kExitOk
                                                                             : kExitNotConverged;
    maybe_write_report(config.out_path, outcome.report);
    return outcome;
}

ScanManifest parse_scan_manifest(std::istream& in, RunConfig shared, bool excited) {
    ScanManifest manifest;
    manifest.shared = std::move(shared);
    manifest.excited = excited;
    std::unordered_set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = "scan manifest line " + std::to_string(line_no);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> parts;
        std::string word;
        while (words >> word) parts.push_back(word);
        if (parts.empty()) continue;
        if (parts.size() < 2)
            throw std::invalid_argument(where +
                                        ": expected 'label path' or 'label hubbard S T U'");
        ScanManifest::Entry entry;
        entry.label = parts[0];
        if (!seen.insert(entry.label).second)
            throw std::invalid_argument(where + ": duplicate label '" + entry.label + "'");
        if (parts[1] == "hubbard") {
            if (parts.size() != 5)
                throw std::invalid_argument(where + ": hubbard entries take 'label hubbard S T U'");
            entry.source.model = "hubbard";
            entry.source.sites = parse_int_token(parts[2], where);
            entry.source.t = parse_real_token(parts[3], where);
            entry.source.u = parse_real_token(parts[4], where);
        } else {
            if (parts.size() != 2)
                throw std::invalid_argument(where + ": fcidump entries take 'label path'");
            entry.source.fcidump_path = parts[1];
        }
        manifest.entries.push_back(std::move(entry));
    }
    if (manifest.entries.empty())
        throw std::invalid_argument("scan manifest: no entries after comment stripping");
    return manifest;
}

ScanManifest parse_scan_manifest_file(const std::string& path, RunConfig shared, bool excited) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scan manifest: cannot open '" + path + "'");
    return parse_scan_manifest(in, std::move(shared), excited);
}

namespace {

struct ScanRowData {
    double e_vqe = 0.0;
    double e_fci = 0.0;
    double error_meh = 0.0;
    bool converged = false;
    double e_vqe_exc = 0.0;
    double e_fci_exc = 0.0;
    double error_exc_meh = 0.0;
    double overlap_residual = 0.0;
    bool converged_exc = true;
    bool flagged_exc = false;
};

} // namespace

ScanOutcome run_scan(const ScanManifest& manifest) {
    if (manifest.entries.empty()) throw std::invalid_argument("scan: empty manifest");
    const int n = static_cast<int>(manifest.entries.size());
    std::vector<ScanRowData> rows(n);
    // points fan out across the configured width; restarts inside one point
    // stay serial so the thread count is bounded by shared.jobs
    parallel_for(n, std::max(1, manifest.shared.jobs), [&](int i) {
        RunConfig config = manifest.shared;
        config.source = manifest.entries[i].source;
        config.jobs = 1;
        config.out_path.reset();
        const GroundRun ground = execute_ground(config, manifest.excited ? 3 : 2);
        ScanRowData& row = rows[i];
        row.e_vqe = ground.vqe.energy;
        row.e_fci = ground.fci.at(0).value;
        row.error_meh = (row.e_vqe - row.e_fci) * 1000.0;
        row.converged = ground.vqe.converged;
        if (manifest.excited) {
            const ExcitedRun excited = execute_excited(config, ground);
            row.e_vqe_exc = excited.result.vqe.energy;
            row.e_fci_exc = excited.fci_excited.value;
            row.error_exc_meh = (row.e_vqe_exc - row.e_fci_exc) * 1000.0;
            row.overlap_residual = excited.result.residual_overlap_sq;
            row.converged_exc = excited.result.vqe.converged;
            row.flagged_exc = excited.result.flagged;
        }
    });

    std::ostringstream csv;
    csv << "label,e_vqe,e_fci,error_meh,e_vqe_exc,e_fci_exc,error_exc_meh,overlap_residual\n";
    for (int i = 0; i < n; ++i) {
        const ScanRowData& row = rows[i];
        csv << manifest.entries[i].label << ',' << format_double(row.e_vqe) << ','
            << format_double(row.e_fci) << ',' << format_double(row.error_meh) << ',';
        if (manifest.excited)
            csv << format_double(row.e_vqe_exc) << ',' << format_double(row.e_fci_exc) << ','
                << format_double(row.error_exc_meh) << ',' << format_double(row.overlap_residual);
        else
            csv << ",,,";
        csv << '\n';
    }

    ScanOutcome outcome;
    outcome.csv = csv.str();
    Json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["run"] = "scan";
    summary["timestamp"] = timestamp_utc();
    summary["excited"] = manifest.excited;
    Json points = Json::array();
    std::vector<double> converged_errors;
    std::vector<double> converged_exc_errors;
    bool all_converged = true;
    for (int i = 0; i < n; ++i) {
        const ScanRowData& row = rows[i];
        Json point;
        point["label"] = manifest.entries[i].label;
        point["e_vqe"] = row.e_vqe;
        point["e_fci"] = row.e_fci;
        point["error_meh"] = row.error_meh;
        point["converged"] = row.converged;
        if (row.converged) converged_errors.push_back(row.error_meh);
        all_converged = all_converged && row.converged;
        if (manifest.excited) {
            point["e_vqe_exc"] = row.e_vqe_exc;
            point["e_fci_exc"] = row.e_fci_exc;
            point["error_exc_meh"] = row.error_exc_meh;
            point["overlap_residual"] = row.overlap_residual;
            point["converged_excited"] = row.converged_exc;
            point["flagged_excited"] = row.flagged_exc;
            if (row.converged && row.converged_exc)
                converged_exc_errors.push_back(row.error_exc_meh);
            all_converged = all_converged && row.converged_exc;
        }
        points.push_back(point);
    }
    summary["points"] = points;
    summary["n_points"] = n;
    summary["n_converged"] = converged_errors.size();
    summary["npe_meh"] = converged_errors.empty() ? Json() : Json(npe(converged_errors));
    if (manifest.excited)
        summary["npe_exc_meh"] =
            converged_exc_errors.empty() ? Json() : Json(npe(converged_exc_errors));
    outcome.summary = summary;
    outcome.exit_code = all_converged ? kExitOk : kExitNotConverged;
    if (manifest.shared.out_path) {
        write_text_file(*manifest.shared.out_path + ".csv", outcome.csv);
        write_text_file(*manifest.shared.out_path + ".json", summary.dump(2) + "\n");
    }
    return outcome;
}

RunOutcome run_resources(const ResourceRequest& request) {
    const ScalingReport report = scaling_report(request.kind, request.k, request.sizes);
    std::ostringstream csv;
    write_scaling_csv(report, csv);
    RunOutcome outcome;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["run"] = "resources";
    j["timestamp"] = timestamp_utc();
    Json ansatz;
    ansatz["kind"] = to_string(report.kind);
    ansatz["k"] = report.k;
    j["ansatz"] = ansatz;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["n_spin_orbitals"] = row.n_spin_orbitals;
        r["eta"] = row.eta;
        r["singles"] = row.singles;
        r["doubles"] = row.doubles;
        r["pair_doubles"] = row.pair_doubles;
        r["term_count"] = row.term_count;
        r["layer_count"] = row.layer_count;
        rows.push_back(r);
    }
    j["rows"] = rows;
    j["term_exponent"] = report.term_exponent;
    j["layer_exponent"] = report.layer_exponent;
    j["csv"] = csv.str();
    outcome.report = j;
    outcome.exit_code = kExitOk;
    if (request.out_path) write_text_file(*request.out_path, csv.str());
    return outcome;
}

} // namespace uccvqe
