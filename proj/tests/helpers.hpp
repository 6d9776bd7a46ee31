#pragma once

// Shared fixtures and independent oracles for the test binaries. Everything
// here is written from first principles (ordered products of creation
// operators, closed-form combinatorics, dense linear algebra) so the library
// is cross-checked against a second implementation rather than against
// itself.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "uccvqe/hamiltonian.hpp"

namespace testutil {

// Exhaustive scan over all N-bit masks with the requested number of set even
// (alpha) and odd (beta) bits. Independent of SectorBasis's enumeration.
inline std::vector<std::uint64_t> enumerate_sector(int n, int na, int nb) {
    std::vector<std::uint64_t> masks;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        int even = 0;
        int odd = 0;
        for (int s = 0; s < n; ++s)
            if ((mask >> s) & 1) ((s % 2 == 0) ? even : odd) += 1;
        if (even == na && odd == nb) masks.push_back(mask);
    }
    return masks;
}

// Sign oracle representing a determinant literally as the ordered product
// a+_{s1} a+_{s2} ... |vac> with s1 < s2 < ...; operators anticommute through
// the list one position at a time, so no popcount shortcut is involved.
struct OrderedDeterminant {
    std::vector<int> occupied; // ascending spin orbitals
    int sign = 1;
    bool alive = true;
};

inline OrderedDeterminant ordered_from_mask(std::uint64_t mask, int n) {
    OrderedDeterminant det;
    for (int s = 0; s < n; ++s)
        if ((mask >> s) & 1) det.occupied.push_back(s);
    return det;
}

inline std::uint64_t ordered_to_mask(const OrderedDeterminant& det) {
    std::uint64_t mask = 0;
    for (const int s : det.occupied) mask |= std::uint64_t{1} << s;
    return mask;
}

inline void oracle_annihilate(OrderedDeterminant& det, int p) {
    if (!det.alive) return;
    const auto it = std::find(det.occupied.begin(), det.occupied.end(), p);
    if (it == det.occupied.end()) {
        det.alive = false;
        return;
    }
    if (std::distance(det.occupied.begin(), it) % 2 == 1) det.sign = -det.sign;
    det.occupied.erase(it);
}

inline void oracle_create(OrderedDeterminant& det, int p) {
    if (!det.alive) return;
    const auto it = std::lower_bound(det.occupied.begin(), det.occupied.end(), p);
    if (it != det.occupied.end() && *it == p) {
        det.alive = false;
        return;
    }
    if (std::distance(det.occupied.begin(), it) % 2 == 1) det.sign = -det.sign;
    det.occupied.insert(it, p);
}

inline long choose(int n, int r) {
    if (r < 0 || r > n) return 0;
    long value = 1;
    for (int i = 1; i <= r; ++i) value = value * (n - r + i) / i;
    return value;
}

// dense scaling-and-squaring exponential, the reference for expmv
inline Eigen::MatrixXd dense_exp(const Eigen::MatrixXd& g) { return g.exp(); }

inline Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(gen);
    v.normalize();
    return v;
}

inline Eigen::VectorXd random_params(int n, double scale, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> uniform(-scale, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(gen);
    return v;
}

inline Eigen::MatrixXd random_antisymmetric(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd r(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) r(i, j) = normal(gen);
    return r - r.transpose().eval();
}

// random integrals with the exact index symmetries of a real molecular
// Hamiltonian (set_eri completes the 8-fold class on every call)
inline uccvqe::MolecularHamiltonian random_hamiltonian(int n_spatial, int n_electrons,
                                                       std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    uccvqe::MolecularHamiltonian h(n_spatial, n_electrons, n_electrons % 2);
    for (int p = 0; p < n_spatial; ++p)
        for (int q = 0; q <= p; ++q) {
            const double value = uniform(gen);
            h.one_body(p, q) = value;
            h.one_body(q, p) = value;
        }
    for (int p = 0; p < n_spatial; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) h.set_eri(p, q, r, s, 0.5 * uniform(gen));
    h.core_energy = uniform(gen);
    return h;
}

} // namespace testutil
