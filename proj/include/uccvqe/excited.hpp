#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "uccvqe/ansatz.hpp"
#include "uccvqe/vqe.hpp"

namespace uccvqe {

// Residual ground-state overlap above which an excited run is flagged as
// suspect (level shift too small, optimizer fell back into the ground state).
inline constexpr double kResidualOverlapWarn = 1e-2;

// Raised when the default level-shift rule mu = -E_0 is requested for a
// non-bound ground state (E_0 >= 0); mapped to its own process exit code.
struct MuValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Orthogonality-constrained excited-state search: minimize
// <psi|H|psi> + mu |<psi_0|psi>|^2 over the same ansatz machinery as the
// ground solve. The default shift mu = -E_0 assumes a bound state (E_0 < 0);
// mu_override replaces the rule, for spectra where -E_0 does not dominate the
// gap.
struct OcVqeConfig {
    double mu = 0.0;
    std::optional<double> mu_override;
    StateVector ground_state;
    MultiDetReference reference;
    Ansatz ansatz;
};

// Resolves the shift (default rule mu = -E_0, validated E_0 < 0; override
// accepted as-is) and packages the configuration. Throws std::invalid_argument
// when the default rule is requested for E_0 >= 0.
OcVqeConfig make_oc_config(const StateVector& ground_state, double ground_energy,
                           std::optional<double> mu_override, MultiDetReference reference,
                           Ansatz ansatz);

// |<a|b>|^2; states must share a basis.
double overlap_squared(const StateVector& a, const StateVector& b);

// Penalized objective <psi(t)|H|psi(t)> + mu |<psi_0|psi(t)>|^2, evaluated as
// the exact sum of the plain objective and the penalty term.
double oc_objective(const VqeProblem& problem, const OcVqeConfig& config,
                    const Eigen::VectorXd& params);

struct ExcitedResult {
    VqeResult vqe;               // energy = plain <H> at the optimum
    double penalized_energy = 0.0;
    double residual_overlap_sq = 0.0;
    double mu = 0.0;
    bool flagged = false;        // residual overlap above kResidualOverlapWarn
};

// Multi-start minimization of oc_objective; restart selection follows the
// ground-solve contract applied to the penalized value. The reported energy
// excludes the penalty; the residual overlap is always reported.
ExcitedResult solve_excited(const Eigen::MatrixXd& hamiltonian_matrix, const OcVqeConfig& config,
                            SectorBasisPtr basis, const MinimizeOptions& options);

// Error-vs-overlap scaling probe. For each epsilon, contaminates the exact
// ground state as sqrt(1 - eps^2) psi_0 + eps perp, rebuilds the shifted
// operator H - E~_0 |psi~_0><psi~_0| with the contaminated energy E~_0, and
// records |E_1(eps) - E_1(0)| from its lowest eigenvalue. Returns the
// least-squares slope of log error against log epsilon, discarding points
// with error below 1e-12. Requires unit, mutually orthogonal inputs (psi_0 an
// eigenvector within residual 1e-10) and strictly positive, strictly
// decreasing epsilons.
double epsilon_scaling_study(const Eigen::MatrixXd& hamiltonian_matrix,
                             const StateVector& exact_ground, const StateVector& perp,
                             std::span<const double> epsilons);

} // namespace uccvqe
