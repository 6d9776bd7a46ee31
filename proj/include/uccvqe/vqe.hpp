#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "uccvqe/ansatz.hpp"
#include "uccvqe/fock.hpp"
#include "uccvqe/hamiltonian.hpp"

namespace uccvqe {

// A variational minimization instance: sector Hamiltonian matrix, ansatz and
// reference over a fixed basis. Construction precomputes the generator
// sparsity, so objective and gradient calls are cheap to repeat.
class VqeProblem {
  public:
    VqeProblem(Eigen::MatrixXd hamiltonian_matrix, Ansatz ansatz,
               MultiDetReference reference, SectorBasisPtr basis);

    const Eigen::MatrixXd& hamiltonian_matrix() const { return h_; }
    const Ansatz& ansatz() const { return preparer_.ansatz(); }
    const SectorBasisPtr& basis() const { return preparer_.basis(); }
    const StatePreparer& preparer() const { return preparer_; }
    int n_params() const { return preparer_.ansatz().n_params(); }

    StateVector state(const Eigen::VectorXd& params) const;

  private:
    Eigen::MatrixXd h_;
    StatePreparer preparer_;
};

enum class GradientMode { FiniteDifference, Exact };

// <psi(t)|H|psi(t)> with |psi(t)> = prepare_state(ansatz, t, reference).
double objective(const VqeProblem& problem, const Eigen::VectorXd& params);

// FiniteDifference: central differences, step 1e-5 * max(1, |t_mu|) per
// coordinate. Exact: doubled-matrix derivative of each block exponential.
Eigen::VectorXd gradient(const VqeProblem& problem, const Eigen::VectorXd& params,
                         GradientMode mode = GradientMode::Exact);

struct VqeResult {
    double energy = 0.0;
    Eigen::VectorXd params;
    double gradient_norm = 0.0;
    int restart_index = -1;
    bool converged = false;
    std::vector<double> restart_energies;
};

struct MinimizeOptions {
    int restarts = 50;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    int max_iterations = 500;
    double gradient_tolerance = 1e-8; // Euclidean norm
    double energy_tolerance = 1e-10;  // change between accepted steps
    int jobs = 1;                     // concurrent restarts
    // Extra deterministic starting points appended after the seeded protocol
    // (restart indices restarts, restarts+1, ...). Used for k-block warm
    // starts.
    std::vector<Eigen::VectorXd> extra_starts;
};

// Multi-start BFGS. Start 0 is the all-zero vector; starts 1..restarts-1 draw
// each amplitude uniformly from [-init_scale, init_scale] on a stream seeded
// by (seed, restart_index). Returns the best converged restart, exact energy
// ties broken toward the lowest restart index; if nothing converged, the best
// partial result with converged = false. Sequential and concurrent execution
// produce identical results.
VqeResult minimize_multistart(const VqeProblem& problem, const MinimizeOptions& options);

VqeResult minimize_multistart(const VqeProblem& problem, int restarts, std::uint64_t seed,
                              double init_scale);

} // namespace uccvqe
