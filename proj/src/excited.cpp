#include "uccvqe/excited.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "uccvqe/oracle.hpp"
#include "uccvqe/util.hpp"

namespace uccvqe {

namespace {

void require_same_sector(const SectorBasisPtr& a, const SectorBasisPtr& b, const char* what) {
    if (!a || !b) throw std::invalid_argument(std::string("excited: ") + what + " has no basis");
    if (a == b) return;
    if (a->n_spin_orbitals() != b->n_spin_orbitals() || a->n_alpha() != b->n_alpha() ||
        a->n_beta() != b->n_beta())
        throw std::invalid_argument(std::string("excited: ") + what +
                                    " lives in a different sector");
}

void require_state_shape(const StateVector& state, const char* what) {
    if (!state.basis) throw std::invalid_argument(std::string("excited: ") + what + " has no basis");
    if (state.amplitudes.size() != static_cast<Eigen::Index>(state.basis->size()))
        throw std::invalid_argument(std::string("excited: ") + what +
                                    " amplitude count does not match its basis");
}

} // namespace

OcVqeConfig make_oc_config(const StateVector& ground_state, double ground_energy,
                           std::optional<double> mu_override, MultiDetReference reference,
                           Ansatz ansatz) {
    require_state_shape(ground_state, "ground state");
    OcVqeConfig config;
    config.mu_override = mu_override;
    if (mu_override) {
        config.mu = *mu_override;
    } else {
        if (!(ground_energy < 0.0)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "excited: default level shift mu = -E0 needs E0 < 0, got E0 = %.12g; "
                          "pass an explicit mu",
                          ground_energy);
            throw MuValidationError(msg);
        }
        config.mu = -ground_energy;
    }
    config.ground_state = ground_state;
    config.reference = std::move(reference);
    config.ansatz = std::move(ansatz);
    return config;
}

double overlap_squared(const StateVector& a, const StateVector& b) {
    require_state_shape(a, "state");
    require_state_shape(b, "state");
    require_same_sector(a.basis, b.basis, "state");
    const double overlap = a.amplitudes.dot(b.amplitudes);
    return overlap * overlap;
}

double oc_objective(const VqeProblem& problem, const OcVqeConfig& config,
                    const Eigen::VectorXd& params) {
    const StateVector psi = problem.state(params);
    return objective(problem, params) + config.mu * overlap_squared(config.ground_state, psi);
}

ExcitedResult solve_excited(const Eigen::MatrixXd& hamiltonian_matrix, const OcVqeConfig& config,
                            SectorBasisPtr basis, const MinimizeOptions& options) {
    require_state_shape(config.ground_state, "ground state");
    require_same_sector(config.ground_state.basis, basis, "ground state");
    if (hamiltonian_matrix.rows() != static_cast<Eigen::Index>(basis->size()))
        throw std::invalid_argument("excited: Hamiltonian dimension does not match the sector");

    // The penalty mu |<psi_0|psi>|^2 is the quadratic form of the rank-one
    // update mu psi_0 psi_0^T, so the penalized search reuses the plain
    // machinery on the shifted operator.
    const Eigen::VectorXd& g = config.ground_state.amplitudes;
    Eigen::MatrixXd shifted = hamiltonian_matrix;
    shifted.noalias() += config.mu * g * g.transpose();
    VqeProblem problem(std::move(shifted), config.ansatz, config.reference, basis);
    VqeResult vqe = minimize_multistart(problem, options);

    ExcitedResult result;
    result.penalized_energy = vqe.energy;
    result.mu = config.mu;
    const StateVector optimum{basis, problem.preparer().prepare(vqe.params)};
    result.residual_overlap_sq = overlap_squared(config.ground_state, optimum);
    result.flagged = result.residual_overlap_sq > kResidualOverlapWarn;
    vqe.energy = optimum.amplitudes.dot(hamiltonian_matrix * optimum.amplitudes);
    result.vqe = std::move(vqe);
    return result;
}

double epsilon_scaling_study(const Eigen::MatrixXd& hamiltonian_matrix,
                             const StateVector& exact_ground, const StateVector& perp,
                             std::span<const double> epsilons) {
    require_state_shape(exact_ground, "ground state");
    require_state_shape(perp, "perturbation direction");
    require_same_sector(exact_ground.basis, perp.basis, "perturbation direction");
    const Eigen::VectorXd& g = exact_ground.amplitudes;
    const Eigen::VectorXd& p = perp.amplitudes;
    if (hamiltonian_matrix.rows() != g.size() || hamiltonian_matrix.cols() != g.size())
        throw std::invalid_argument("epsilon study: Hamiltonian dimension mismatch");
    if (std::abs(g.norm() - 1.0) > 1e-12 || std::abs(p.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("epsilon study: states must be unit vectors");
    if (std::abs(g.dot(p)) > 1e-12)
        throw std::invalid_argument("epsilon study: perturbation direction not orthogonal");
    const double e0 = g.dot(hamiltonian_matrix * g);
    if ((hamiltonian_matrix * g - e0 * g).norm() > 1e-10)
        throw std::invalid_argument("epsilon study: ground state is not an eigenvector");
    if (epsilons.size() < 2)
        throw std::invalid_argument("epsilon study: need at least two epsilons");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
            throw std::invalid_argument("epsilon study: epsilons must lie in (0, 1)");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("epsilon study: epsilons must decrease strictly");
    }

    auto deflated_lowest = [&](const Eigen::VectorXd& state) {
        const double energy = state.dot(hamiltonian_matrix * state);
        Eigen::MatrixXd deflated = hamiltonian_matrix;
        deflated.noalias() -= energy * state * state.transpose();
        return fci_lowest(deflated, 1)[0].value;
    };
    const double clean = deflated_lowest(g);

    std::vector<double> log_eps;
    std::vector<double> log_err;
    for (const double eps : epsilons) {
        const Eigen::VectorXd contaminated = std::sqrt(1.0 - eps * eps) * g + eps * p;
        const double error = std::abs(deflated_lowest(contaminated) - clean);
        // below this the deflated eigenvalue is dominated by solver noise, not
        // by the eps^2 contamination signal
        if (error < 1e-12) continue;
        log_eps.push_back(std::log(eps));
        log_err.push_back(std::log(error));
    }
    if (log_eps.size() < 2)
        throw std::invalid_argument(
            "epsilon study: fewer than two epsilons produced errors above noise");
    return ols_slope(log_eps, log_err);
}

} // namespace uccvqe
