#include "uccvqe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uccvqe/util.hpp"

namespace uccvqe {

namespace {

constexpr double kResidualTolerance = 1e-9;
constexpr double kDegeneracyTolerance = 1e-10;
constexpr int kDenseCutoff = 4096;

void check_symmetric(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensolver: matrix must be square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("eigensolver: matrix must be symmetric");
}

std::vector<EigenPair> dense_lowest(const Eigen::MatrixXd& h, int n_states) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver: dense diagonalization failed");
    std::vector<EigenPair> out(n_states);
    for (int i = 0; i < n_states; ++i) {
        out[i].value = solver.eigenvalues()[i];
        out[i].vector = solver.eigenvectors().col(i);
    }
    return out;
}

// One Lanczos sweep with full reorthogonalization against both the Krylov
// columns and previously converged (deflated) eigenvectors; returns the
// lowest Ritz pair of the deflated operator.
EigenPair lanczos_lowest_deflated(const Eigen::MatrixXd& h,
                                  const std::vector<Eigen::VectorXd>& deflated) {
    const auto dim = h.rows();
    const int space_left = static_cast<int>(dim) - static_cast<int>(deflated.size());
    const int max_steps = std::min<int>(space_left, 600);

    auto project_out = [&](Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& set) {
        for (const auto& u : set) v -= u.dot(v) * u;
    };

    UniformStream stream(0x5eed, deflated.size());
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = stream.next_symmetric(1.0);
    project_out(v, deflated);
    if (v.norm() < 1e-12) throw std::runtime_error("eigensolver: deflated space exhausted");
    v.normalize();

    std::vector<Eigen::VectorXd> krylov{v};
    std::vector<double> alpha, beta; // tridiagonal coefficients
    EigenPair best;

    for (int m = 1; m <= max_steps; ++m) {
        Eigen::VectorXd w = h * krylov.back();
        project_out(w, deflated);
        alpha.push_back(krylov.back().dot(w));
        // full reorthogonalization keeps the basis numerically orthogonal
        project_out(w, krylov);
        project_out(w, krylov);
        const double b = w.norm();

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
        const Eigen::VectorXd s = small.eigenvectors().col(0);
        const double ritz_residual = b * std::abs(s[m - 1]);

        if (ritz_residual <= 0.1 * kResidualTolerance || b < 1e-14 || m == max_steps ||
            m == space_left) {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
            for (int i = 0; i < m; ++i) y += s[i] * krylov[i];
            project_out(y, deflated);
            y.normalize();
            best.value = small.eigenvalues()[0];
            best.vector = y;
            // refresh the Ritz value after the projection
            best.value = y.dot(h * y);
            return best;
        }
        beta.push_back(b);
        krylov.push_back(w / b);
    }
    throw std::runtime_error("eigensolver: Lanczos failed to converge");
}

std::vector<EigenPair> lanczos_lowest(const Eigen::MatrixXd& h, int n_states) {
    std::vector<EigenPair> out;
    std::vector<Eigen::VectorXd> deflated;
    for (int k = 0; k < n_states; ++k) {
        out.push_back(lanczos_lowest_deflated(h, deflated));
        deflated.push_back(out.back().vector);
    }
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    return out;
}

} // namespace

std::vector<EigenPair> fci_lowest(const Eigen::MatrixXd& h, int n_states, DiagMethod method) {
    check_symmetric(h);
    if (n_states < 1 || n_states > h.rows())
        throw std::invalid_argument("eigensolver: n_states out of range");
    if (method == DiagMethod::Auto)
        method = h.rows() < kDenseCutoff ? DiagMethod::Dense : DiagMethod::Lanczos;

    auto pairs = method == DiagMethod::Dense ? dense_lowest(h, n_states)
                                             : lanczos_lowest(h, n_states);
    for (auto& p : pairs) {
        const double residual = (h * p.vector - p.value * p.vector).norm();
        if (residual > kResidualTolerance)
            throw std::runtime_error("eigensolver: residual above tolerance");
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const bool with_prev = i > 0 && pairs[i].value - pairs[i - 1].value < kDegeneracyTolerance;
        const bool with_next =
            i + 1 < pairs.size() && pairs[i + 1].value - pairs[i].value < kDegeneracyTolerance;
        pairs[i].degenerate = with_prev || with_next;
    }
    return pairs;
}

double npe(std::span<const double> errors) {
    if (errors.empty()) throw std::invalid_argument("npe: empty error curve");
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    return *hi - *lo;
}

CurveErrors make_curve_errors(std::vector<std::string> labels, std::vector<double> errors_meh) {
    if (labels.size() != errors_meh.size())
        throw std::invalid_argument("curve errors: label/error length mismatch");
    CurveErrors curve;
    curve.npe_meh = npe(errors_meh);
    curve.labels = std::move(labels);
    curve.errors_meh = std::move(errors_meh);
    return curve;
}

} // namespace uccvqe
