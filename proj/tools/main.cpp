#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "uccvqe/driver.hpp"

namespace {

const std::map<std::string, uccvqe::AnsatzKind> kAnsatzNames{
    {"uccsd", uccvqe::AnsatzKind::Uccsd},
    {"uccgsd", uccvqe::AnsatzKind::Uccgsd},
    {"upccsd", uccvqe::AnsatzKind::Upccsd},
    {"kupccgsd", uccvqe::AnsatzKind::KUpccgsd},
};

// Flags shared by ground, excited, and scan. Every flag doubles as a
// key in the --config file; underscore aliases keep the file keys matching
// the configuration field names.
void add_run_flags(CLI::App* cmd, uccvqe::RunConfig& config) {
    cmd->set_config("--config", "", "flat key=value configuration file; flags override it");
    cmd->add_option("--fcidump", config.source.fcidump_path, "FCIDUMP integrals file");
    cmd->add_option("--model", config.source.model, "builtin model name (hubbard)");
    cmd->add_option("--sites", config.source.sites, "builtin model: site count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--t", config.source.t, "builtin model: hopping amplitude");
    cmd->add_option("--u", config.source.u, "builtin model: on-site repulsion");
    cmd->add_option("--n-alpha,--n_alpha", config.n_alpha,
                    "alpha electron count override (default from NELEC/MS2)");
    cmd->add_option("--n-beta,--n_beta", config.n_beta,
                    "beta electron count override (default from NELEC/MS2)");
    cmd->add_option("--ansatz", config.ansatz, "ansatz kind")
        ->transform(CLI::CheckedTransformer(kAnsatzNames, CLI::ignore_case));
    cmd->add_option("--k", config.k, "block count (kupccgsd only)")->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", config.restarts, "optimizer restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "restart sampling seed");
    cmd->add_option("--init-scale,--init_scale", config.init_scale,
                    "uniform half-width of random initial amplitudes")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iters,--max_iterations", config.max_iterations,
                    "BFGS iteration cap per restart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", config.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", config.out_path, "write the report to this path");
}

void add_excited_flags(CLI::App* cmd, uccvqe::RunConfig& config, std::string& reference_text) {
    cmd->add_option("--mu", config.mu_override,
                    "orthogonality level shift (default: negated ground energy)");
    cmd->add_option("--reference", reference_text,
                    "excited reference as spatial promotions 'i>a;j>b' (default aufbau)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unitary coupled-cluster VQE simulator and resource estimator"};
    app.require_subcommand(1);

    uccvqe::RunConfig config;
    uccvqe::ResourceRequest request;
    std::string reference_text;
    std::string sizes_text;
    std::string manifest_path;
    bool scan_excited = false;

    auto* ground = app.add_subcommand("ground", "ground-state VQE with FCI comparison");
    add_run_flags(ground, config);

    auto* excited =
        app.add_subcommand("excited", "ground run plus orthogonality-constrained excited state");
    add_run_flags(excited, config);
    add_excited_flags(excited, config, reference_text);

    auto* scan = app.add_subcommand("scan", "error curve over a manifest of Hamiltonians");
    scan->add_option("manifest", manifest_path, "manifest file: 'label path' or 'label hubbard S T U' per line")
        ->required()
        ->check(CLI::ExistingFile);
    add_run_flags(scan, config);
    add_excited_flags(scan, config, reference_text);
    scan->add_flag("--excited", scan_excited, "also solve the first excited state per point");

    auto* resources = app.add_subcommand("resources", "ansatz resource counts and scaling fit");
    resources->set_config("--config", "", "flat key=value configuration file; flags override it");
    resources->add_option("--ansatz", request.kind, "ansatz kind")
        ->transform(CLI::CheckedTransformer(kAnsatzNames, CLI::ignore_case));
    resources->add_option("--k", request.k, "block count (kupccgsd only)")
        ->check(CLI::PositiveNumber);
    resources->add_option("--sizes", sizes_text, "size list 'N:eta,N:eta,...'")->required();
    resources->add_option("--out", request.out_path, "write the CSV to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return uccvqe::kExitInputError;
    }

    try {
        if (ground->parsed()) {
            const uccvqe::RunOutcome outcome = uccvqe::run_ground(config);
            std::cout << outcome.report.dump(2) << '\n';
            return outcome.exit_code;
        }
        if (excited->parsed()) {
            config.reference_promotions = uccvqe::parse_promotions(reference_text);
            const uccvqe::RunOutcome outcome = uccvqe::run_excited(config);
            std::cout << outcome.report.dump(2) << '\n';
            return outcome.exit_code;
        }
        if (scan->parsed()) {
            config.reference_promotions = uccvqe::parse_promotions(reference_text);
            const uccvqe::ScanManifest manifest =
                uccvqe::parse_scan_manifest_file(manifest_path, config, scan_excited);
            const uccvqe::ScanOutcome outcome = uccvqe::run_scan(manifest);
            std::cout << outcome.csv;
            if (!config.out_path) std::cerr << outcome.summary.dump(2) << '\n';
            return outcome.exit_code;
        }
        request.sizes = uccvqe::parse_sizes(sizes_text);
        const uccvqe::RunOutcome outcome = uccvqe::run_resources(request);
        std::cout << outcome.report["csv"].get<std::string>();
        return outcome.exit_code;
    } catch (const uccvqe::MuValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return uccvqe::kExitMuInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return uccvqe::kExitInputError;
    }
}
