#include "uccvqe/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uccvqe {

std::optional<AppliedDeterminant> annihilate(Determinant mask, int p) {
    const Determinant bit = Determinant{1} << p;
    if (!(mask & bit)) return std::nullopt;
    return AppliedDeterminant{mask & ~bit, parity_below(mask, p)};
}

std::optional<AppliedDeterminant> create(Determinant mask, int p) {
    const Determinant bit = Determinant{1} << p;
    if (mask & bit) return std::nullopt;
    return AppliedDeterminant{mask | bit, parity_below(mask, p)};
}

std::optional<AppliedDeterminant> apply_excitation(const Excitation& exc, Determinant mask) {
    // operator strings act right to left
    int ops[4];
    int n_annihilate = 0, n_total = 0;
    switch (exc.kind) {
    case ExcitationKind::Single: // a+_q a_p
        ops[0] = exc.idx[0];
        ops[1] = exc.idx[1];
        n_annihilate = 1;
        n_total = 2;
        break;
    case ExcitationKind::Double: // a+_a a+_b a_j a_i
        ops[0] = exc.idx[0];
        ops[1] = exc.idx[1];
        ops[2] = exc.idx[3];
        ops[3] = exc.idx[2];
        n_annihilate = 2;
        n_total = 4;
        break;
    case ExcitationKind::PairDouble: { // a+_{Qa} a+_{Qb} a_{Pb} a_{Pa}
        const int sp = exc.idx[0], sq = exc.idx[1];
        ops[0] = 2 * sp;     // annihilate P alpha
        ops[1] = 2 * sp + 1; // annihilate P beta
        ops[2] = 2 * sq + 1; // create Q beta
        ops[3] = 2 * sq;     // create Q alpha
        n_annihilate = 2;
        n_total = 4;
        break;
    }
    }
    AppliedDeterminant acc{mask, 1};
    for (int step = 0; step < n_total; ++step) {
        const auto next = step < n_annihilate ? annihilate(acc.mask, ops[step])
                                              : create(acc.mask, ops[step]);
        if (!next) return std::nullopt;
        acc.mask = next->mask;
        acc.sign *= next->sign;
    }
    return acc;
}

namespace {

// Ascending n-bit combinations of an m-bit word (Gosper's hack), spread onto
// the given bit positions.
std::vector<Determinant> spin_masks(int m, int n, int first_bit) {
    std::vector<Determinant> out;
    if (n == 0) {
        out.push_back(0);
        return out;
    }
    std::uint64_t comb = (std::uint64_t{1} << n) - 1;
    const std::uint64_t limit = std::uint64_t{1} << m;
    while (comb < limit) {
        Determinant mask = 0;
        for (int i = 0; i < m; ++i)
            if (comb & (std::uint64_t{1} << i)) mask |= Determinant{1} << (first_bit + 2 * i);
        out.push_back(mask);
        const std::uint64_t c = comb & (~comb + 1); // lowest set bit
        const std::uint64_t r = comb + c;
        comb = (((r ^ comb) >> 2) / c) | r;
    }
    return out;
}

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double v = 1.0;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

} // namespace

SectorBasis::SectorBasis(int n_spin_orbitals, int n_alpha, int n_beta)
    : n_spin_orbitals_(n_spin_orbitals), n_alpha_(n_alpha), n_beta_(n_beta) {
    if (n_spin_orbitals <= 0 || n_spin_orbitals % 2 != 0 || n_spin_orbitals > 64)
        throw std::invalid_argument("sector basis: spin-orbital count must be even, in (0, 64]");
    const int n_spatial = n_spin_orbitals / 2;
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n_spatial || n_beta > n_spatial)
        throw std::invalid_argument("sector basis: occupation exceeds available orbitals");
    const double dim = binomial(n_spatial, n_alpha) * binomial(n_spatial, n_beta);
    if (dim > 16e6)
        throw std::invalid_argument("sector basis: dimension too large to enumerate");

    const auto alphas = spin_masks(n_spatial, n_alpha, 0);
    const auto betas = spin_masks(n_spatial, n_beta, 1);
    determinants_.reserve(alphas.size() * betas.size());
    for (const auto a : alphas)
        for (const auto b : betas) determinants_.push_back(a | b);
    std::sort(determinants_.begin(), determinants_.end());
    index_.reserve(determinants_.size());
    for (std::size_t i = 0; i < determinants_.size(); ++i) index_[determinants_[i]] = i;
}

std::size_t SectorBasis::index_of(Determinant mask) const {
    const auto it = index_.find(mask);
    if (it == index_.end())
        throw std::out_of_range("sector basis: determinant not in sector");
    return it->second;
}

SectorBasisPtr make_sector_basis(int n_spin_orbitals, int n_alpha, int n_beta) {
    return std::make_shared<SectorBasis>(n_spin_orbitals, n_alpha, n_beta);
}

std::vector<GeneratorTriplet> excitation_generator_triplets(const Excitation& exc,
                                                            const SectorBasis& basis) {
    validate_excitation(exc, basis.n_spin_orbitals());
    std::vector<GeneratorTriplet> triplets;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto image = apply_excitation(exc, basis.determinant(col));
        if (!image) continue;
        // particle-sector closure: tau conserves (n_alpha, n_beta)
        const auto row = basis.index_of(image->mask);
        const double v = static_cast<double>(image->sign);
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
        triplets.emplace_back(static_cast<int>(col), static_cast<int>(row), -v);
    }
    return triplets;
}

SparseGenerator excitation_generator(const Excitation& exc, const SectorBasis& basis) {
    const auto triplets = excitation_generator_triplets(exc, basis);
    SparseGenerator g(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    g.setFromTriplets(triplets.begin(), triplets.end());
    return g;
}

SparseGenerator assemble_generator(std::span<const Excitation> excitations,
                                   const Eigen::VectorXd& params, const SectorBasis& basis) {
    if (params.size() != static_cast<Eigen::Index>(excitations.size()))
        throw std::invalid_argument("assemble_generator: parameter count mismatch");
    std::vector<GeneratorTriplet> all;
    for (std::size_t mu = 0; mu < excitations.size(); ++mu) {
        if (params[static_cast<Eigen::Index>(mu)] == 0.0) continue;
        for (const auto& t : excitation_generator_triplets(excitations[mu], basis))
            all.emplace_back(t.row(), t.col(), params[static_cast<Eigen::Index>(mu)] * t.value());
    }
    SparseGenerator g(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    g.setFromTriplets(all.begin(), all.end());
    return g;
}

Eigen::VectorXd expmv(const SparseGenerator& generator, const Eigen::VectorXd& v) {
    if (generator.rows() != generator.cols())
        throw std::invalid_argument("expmv: generator must be square");
    if (generator.rows() != v.size())
        throw std::invalid_argument("expmv: dimension mismatch");
    double norm1 = 0.0; // max absolute column sum
    for (int col = 0; col < generator.outerSize(); ++col) {
        double sum = 0.0;
        for (SparseGenerator::InnerIterator it(generator, col); it; ++it)
            sum += std::abs(it.value());
        norm1 = std::max(norm1, sum);
    }
    if (norm1 == 0.0) return v;
    if (!(norm1 < 1e6)) throw std::invalid_argument("expmv: generator norm too large");

    // scale so the per-segment Taylor series of exp(G/s) converges in a
    // handful of terms, then apply the segment map s times
    const int segments = std::max(1, static_cast<int>(std::ceil(norm1)));
    constexpr int kMaxTerms = 40;
    constexpr double kTol = 2.2e-17;
    Eigen::VectorXd w = v;
    Eigen::VectorXd term(v.size()), acc(v.size());
    for (int seg = 0; seg < segments; ++seg) {
        term = w;
        acc = w;
        for (int j = 1; j <= kMaxTerms; ++j) {
            term = (generator * term) / (static_cast<double>(segments) * j);
            acc += term;
            if (term.lpNorm<Eigen::Infinity>() <= kTol * acc.lpNorm<Eigen::Infinity>()) break;
        }
        w = acc;
    }
    return w;
}

StateVector expmv(const SparseGenerator& generator, const StateVector& v) {
    return StateVector{v.basis, expmv(generator, v.amplitudes)};
}

} // namespace uccvqe
