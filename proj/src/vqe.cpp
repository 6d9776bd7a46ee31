#include "uccvqe/vqe.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "uccvqe/util.hpp"

namespace uccvqe {

VqeProblem::VqeProblem(Eigen::MatrixXd hamiltonian_matrix, Ansatz ansatz,
                       MultiDetReference reference, SectorBasisPtr basis)
    : h_(std::move(hamiltonian_matrix)),
      preparer_(std::move(ansatz), std::move(reference), std::move(basis)) {
    if (h_.rows() != h_.cols() ||
        h_.rows() != static_cast<Eigen::Index>(preparer_.basis()->size()))
        throw std::invalid_argument("vqe: Hamiltonian dimension does not match the sector");
}

StateVector VqeProblem::state(const Eigen::VectorXd& params) const {
    return StateVector{preparer_.basis(), preparer_.prepare(params)};
}

double objective(const VqeProblem& problem, const Eigen::VectorXd& params) {
    return problem.preparer().quadratic_form(problem.hamiltonian_matrix(), params);
}

Eigen::VectorXd gradient(const VqeProblem& problem, const Eigen::VectorXd& params,
                         GradientMode mode) {
    if (mode == GradientMode::Exact)
        return problem.preparer()
            .quadratic_form_with_gradient(problem.hamiltonian_matrix(), params)
            .second;
    Eigen::VectorXd g(params.size());
    Eigen::VectorXd probe = params;
    for (Eigen::Index mu = 0; mu < params.size(); ++mu) {
        const double h = 1e-5 * std::max(1.0, std::abs(params[mu]));
        probe[mu] = params[mu] + h;
        const double fp = objective(problem, probe);
        probe[mu] = params[mu] - h;
        const double fm = objective(problem, probe);
        probe[mu] = params[mu];
        g[mu] = (fp - fm) / (2.0 * h);
    }
    return g;
}

namespace {

struct Evaluation {
    double f = 0.0;
    Eigen::VectorXd g;
};

using EvalFn = std::function<Evaluation(const Eigen::VectorXd&)>;

struct BfgsOutcome {
    Eigen::VectorXd x;
    double f = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
};

struct LineSearchOutcome {
    bool ok = false;
    double alpha = 0.0;
    Evaluation eval;
    double best_f_seen = 0.0;
};

// Strong Wolfe line search (sufficient decrease + curvature), bisection zoom.
// Falls back to plain sufficient decrease when the bracket collapses, which
// keeps accepted steps strictly monotone in energy.
LineSearchOutcome wolfe_line_search(const EvalFn& eval, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& direction, const Evaluation& at_zero) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    constexpr double alpha_max = 1e3;
    const double f0 = at_zero.f;
    const double g0 = direction.dot(at_zero.g);
    LineSearchOutcome out;
    out.best_f_seen = f0;
    if (!(g0 < 0.0)) return out; // not a descent direction

    auto probe = [&](double alpha) {
        Evaluation e = eval(x + alpha * direction);
        out.best_f_seen = std::min(out.best_f_seen, e.f);
        return e;
    };
    auto accept = [&](double alpha, Evaluation e) {
        out.ok = true;
        out.alpha = alpha;
        out.eval = std::move(e);
        return out;
    };

    auto zoom = [&](double lo, Evaluation e_lo, double hi) -> LineSearchOutcome {
        for (int j = 0; j < 50; ++j) {
            const double alpha = 0.5 * (lo + hi);
            if (std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo))) break;
            Evaluation e = probe(alpha);
            const double slope = direction.dot(e.g);
            if (e.f > f0 + c1 * alpha * g0 || e.f >= e_lo.f) {
                hi = alpha;
            } else {
                if (std::abs(slope) <= -c2 * g0) return accept(alpha, std::move(e));
                if (slope * (hi - lo) >= 0.0) hi = lo;
                lo = alpha;
                e_lo = std::move(e);
            }
        }
        // bracket collapsed: settle for sufficient decrease at the low point
        if (lo > 0.0 && e_lo.f < f0 && e_lo.f <= f0 + c1 * lo * g0)
            return accept(lo, std::move(e_lo));
        return out;
    };

    double alpha_prev = 0.0;
    Evaluation e_prev = at_zero;
    double alpha = 1.0;
    for (int i = 0; i < 30; ++i) {
        Evaluation e = probe(alpha);
        const double slope = direction.dot(e.g);
        if (e.f > f0 + c1 * alpha * g0 || (i > 0 && e.f >= e_prev.f))
            return zoom(alpha_prev, std::move(e_prev), alpha);
        if (std::abs(slope) <= -c2 * g0) return accept(alpha, std::move(e));
        if (slope >= 0.0) return zoom(alpha, std::move(e), alpha_prev);
        if (alpha >= alpha_max) break;
        alpha_prev = alpha;
        e_prev = std::move(e);
        alpha = std::min(2.0 * alpha, alpha_max);
    }
    return out;
}

BfgsOutcome bfgs_minimize(const EvalFn& eval, Eigen::VectorXd x, int max_iterations,
                          double gradient_tolerance, double energy_tolerance) {
    const auto n = x.size();
    Evaluation cur = eval(x);
    BfgsOutcome outcome{std::move(x), cur.f, cur.g.norm(), false};
    if (n == 0 || outcome.gradient_norm <= gradient_tolerance) {
        outcome.converged = true;
        return outcome;
    }
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        Eigen::VectorXd direction = -(hinv * cur.g);
        if (!(direction.dot(cur.g) < 0.0)) { // numerical loss of descent
            hinv.setIdentity();
            direction = -cur.g;
        }
        const auto ls = wolfe_line_search(eval, outcome.x, direction, cur);
        if (!ls.ok) {
            // nothing along the ray improves beyond the energy tolerance:
            // treat as converged-by-stagnation, otherwise report failure
            outcome.converged = (cur.f - ls.best_f_seen) <= energy_tolerance;
            break;
        }
        const Eigen::VectorXd step = ls.alpha * direction;
        const Eigen::VectorXd y = ls.eval.g - cur.g;
        const double decrease = cur.f - ls.eval.f;
        outcome.x += step;
        cur = ls.eval;
        outcome.f = cur.f;
        outcome.gradient_norm = cur.g.norm();
        if (outcome.gradient_norm <= gradient_tolerance ||
            std::abs(decrease) <= energy_tolerance) {
            outcome.converged = true;
            break;
        }
        const double sy = step.dot(y);
        if (sy > 1e-12 * step.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
            hinv = (identity - rho * step * y.transpose()) * hinv *
                       (identity - rho * y * step.transpose()) +
                   rho * step * step.transpose();
        }
    }
    return outcome;
}

} // namespace

VqeResult minimize_multistart(const VqeProblem& problem, const MinimizeOptions& options) {
    if (options.restarts < 1) throw std::invalid_argument("minimize: restarts must be >= 1");
    if (options.init_scale < 0.0) throw std::invalid_argument("minimize: negative init_scale");
    if (options.jobs < 1) throw std::invalid_argument("minimize: jobs must be >= 1");
    const int n = problem.n_params();
    for (const auto& start : options.extra_starts)
        if (start.size() != n)
            throw std::invalid_argument("minimize: warm-start parameter count mismatch");

    const int total = options.restarts + static_cast<int>(options.extra_starts.size());
    auto start_point = [&](int index) -> Eigen::VectorXd {
        if (index >= options.restarts) return options.extra_starts[index - options.restarts];
        if (index == 0) return Eigen::VectorXd::Zero(n);
        UniformStream stream(options.seed, static_cast<std::uint64_t>(index));
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = stream.next_symmetric(options.init_scale);
        return x;
    };
    const EvalFn eval = [&](const Eigen::VectorXd& x) {
        auto [f, g] =
            problem.preparer().quadratic_form_with_gradient(problem.hamiltonian_matrix(), x);
        return Evaluation{f, std::move(g)};
    };

    std::vector<BfgsOutcome> outcomes(total);
    parallel_for(total, options.jobs, [&](int i) {
        outcomes[i] = bfgs_minimize(eval, start_point(i), options.max_iterations,
                                    options.gradient_tolerance, options.energy_tolerance);
    });

    // strictly lower energy wins; the ascending scan keeps the lowest restart
    // index on exact ties. A tolerance window here would let an earlier
    // restart shadow a strictly better warm start, breaking the monotone
    // warm-start guarantee and energy <= min(restart_energies).
    auto better = [&](int candidate, int incumbent) {
        if (incumbent < 0) return true;
        return outcomes[candidate].f < outcomes[incumbent].f;
    };
    int best = -1;
    for (int i = 0; i < total; ++i)
        if (outcomes[i].converged && better(i, best)) best = i;
    const bool any_converged = best >= 0;
    if (!any_converged)
        for (int i = 0; i < total; ++i)
            if (better(i, best)) best = i;

    VqeResult result;
    result.params = outcomes[best].x;
    result.energy = objective(problem, result.params);
    result.gradient_norm = outcomes[best].gradient_norm;
    result.restart_index = best;
    result.converged = any_converged;
    result.restart_energies.reserve(total);
    for (const auto& o : outcomes) result.restart_energies.push_back(o.f);
    return result;
}

VqeResult minimize_multistart(const VqeProblem& problem, int restarts, std::uint64_t seed,
                              double init_scale) {
    MinimizeOptions options;
    options.restarts = restarts;
    options.seed = seed;
    options.init_scale = init_scale;
    return minimize_multistart(problem, options);
}

} // namespace uccvqe
