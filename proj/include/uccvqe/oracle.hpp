#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uccvqe/fock.hpp"

namespace uccvqe {

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
    // true when another returned level lies within 1e-10 of this one
    bool degenerate = false;
};

enum class DiagMethod { Auto, Dense, Lanczos };

// Lowest n_states eigenpairs of a symmetric matrix, ascending, orthonormal
// vectors, residual norm ||H v - E v|| <= 1e-9 enforced. Auto uses dense
// diagonalization below dimension 4096 and Lanczos with full
// reorthogonalization (plus deflation against converged levels, so degenerate
// multiplets come out with their multiplicity) above.
std::vector<EigenPair> fci_lowest(const Eigen::MatrixXd& h, int n_states,
                                  DiagMethod method = DiagMethod::Auto);

// Non-parallelity error: max(errors) - min(errors), in the same unit as the
// inputs (used here on milli-Hartree curves).
double npe(std::span<const double> errors);

// Labeled method-minus-reference error curve in milli-Hartree.
struct CurveErrors {
    std::vector<std::string> labels;
    std::vector<double> errors_meh;
    double npe_meh = 0.0;
};

CurveErrors make_curve_errors(std::vector<std::string> labels, std::vector<double> errors_meh);

} // namespace uccvqe
