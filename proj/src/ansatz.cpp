#include "uccvqe/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uccvqe {

AnsatzKind ansatz_kind_from_string(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "uccsd") return AnsatzKind::Uccsd;
    if (s == "uccgsd") return AnsatzKind::Uccgsd;
    if (s == "upccsd") return AnsatzKind::Upccsd;
    if (s == "kupccgsd") return AnsatzKind::KUpccgsd;
    throw std::invalid_argument("unknown ansatz kind '" + name + "'");
}

std::string to_string(AnsatzKind kind) {
    switch (kind) {
    case AnsatzKind::Uccsd: return "uccsd";
    case AnsatzKind::Uccgsd: return "uccgsd";
    case AnsatzKind::Upccsd: return "upccsd";
    case AnsatzKind::KUpccgsd: return "kupccgsd";
    }
    return "?";
}

int Ansatz::n_params() const {
    return std::accumulate(blocks.begin(), blocks.end(), 0,
                           [](int acc, const auto& b) { return acc + static_cast<int>(b.size()); });
}

int Ansatz::block_offset(int b) const {
    int off = 0;
    for (int i = 0; i < b; ++i) off += static_cast<int>(blocks[i].size());
    return off;
}

namespace {

struct Occupation {
    std::vector<int> occ; // occupied spin orbitals, ascending
    std::vector<int> virt;
};

Occupation aufbau_occupation(int n_spin_orbitals, int n_alpha, int n_beta) {
    Occupation o;
    for (int s = 0; s < n_spin_orbitals; ++s) {
        const int spatial = spatial_of(s);
        const bool occupied = spin_of(s) == 0 ? spatial < n_alpha : spatial < n_beta;
        (occupied ? o.occ : o.virt).push_back(s);
    }
    return o;
}

// spin class of a spin-orbital pair p < q: 0 alpha-alpha, 1 beta-beta, 2 mixed
int pair_class(int p, int q) {
    const int sp = spin_of(p), sq = spin_of(q);
    if (sp == sq) return sp;
    return 2;
}

void append_occ_virt_singles(std::vector<Excitation>& out, const Occupation& o) {
    for (const int i : o.occ)
        for (const int a : o.virt)
            if (spin_of(i) == spin_of(a)) out.push_back(Excitation::single(std::min(i, a),
                                                                           std::max(i, a)));
}

void append_occ_virt_doubles(std::vector<Excitation>& out, const Occupation& o) {
    std::vector<std::pair<int, int>> occ_pairs, virt_pairs;
    for (std::size_t x = 0; x < o.occ.size(); ++x)
        for (std::size_t y = x + 1; y < o.occ.size(); ++y)
            occ_pairs.emplace_back(o.occ[x], o.occ[y]);
    for (std::size_t x = 0; x < o.virt.size(); ++x)
        for (std::size_t y = x + 1; y < o.virt.size(); ++y)
            virt_pairs.emplace_back(o.virt[x], o.virt[y]);
    for (const auto& ij : occ_pairs)
        for (const auto& ab : virt_pairs) {
            if (pair_class(ij.first, ij.second) != pair_class(ab.first, ab.second)) continue;
            // canonical pair order is an amplitude sign gauge; the generator
            // is anti-Hermitian either way
            const auto& lo = ij < ab ? ij : ab;
            const auto& hi = ij < ab ? ab : ij;
            out.push_back(Excitation::dble(lo.first, lo.second, hi.first, hi.second));
        }
}

void append_generalized_singles(std::vector<Excitation>& out, int n_spin_orbitals) {
    for (int p = 0; p < n_spin_orbitals; ++p)
        for (int q = p + 2; q < n_spin_orbitals; q += 2) // q > p of equal parity
            out.push_back(Excitation::single(p, q));
}

void append_generalized_doubles(std::vector<Excitation>& out, int n_spin_orbitals) {
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < n_spin_orbitals; ++p)
        for (int q = p + 1; q < n_spin_orbitals; ++q) pairs.emplace_back(p, q);
    for (std::size_t x = 0; x < pairs.size(); ++x)
        for (std::size_t y = x + 1; y < pairs.size(); ++y) {
            if (pair_class(pairs[x].first, pairs[x].second) !=
                pair_class(pairs[y].first, pairs[y].second))
                continue;
            out.push_back(Excitation::dble(pairs[x].first, pairs[x].second, pairs[y].first,
                                           pairs[y].second));
        }
}

void append_pair_doubles(std::vector<Excitation>& out, std::span<const int> sources,
                         std::span<const int> targets) {
    for (const int p : sources)
        for (const int q : targets)
            if (p < q) out.push_back(Excitation::pair_double(p, q));
}

} // namespace

Ansatz build_ansatz(AnsatzKind kind, int n_spin_orbitals, int n_alpha, int n_beta, int k) {
    if (n_spin_orbitals <= 0 || n_spin_orbitals % 2 != 0)
        throw std::invalid_argument("ansatz: spin-orbital count must be positive and even");
    const int n_spatial = n_spin_orbitals / 2;
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n_spatial || n_beta > n_spatial)
        throw std::invalid_argument("ansatz: occupation exceeds available orbitals");
    if (k < 1) throw std::invalid_argument("ansatz: k must be at least 1");
    if (k != 1 && kind != AnsatzKind::KUpccgsd)
        throw std::invalid_argument("ansatz: k is only meaningful for the k-UpCCGSD family");

    Ansatz ansatz{kind, n_spin_orbitals, n_alpha, n_beta, k, {}};
    const Occupation o = aufbau_occupation(n_spin_orbitals, n_alpha, n_beta);

    switch (kind) {
    case AnsatzKind::Uccsd: {
        std::vector<Excitation> block;
        append_occ_virt_singles(block, o);
        append_occ_virt_doubles(block, o);
        ansatz.blocks.push_back(std::move(block));
        break;
    }
    case AnsatzKind::Uccgsd: {
        std::vector<Excitation> block;
        append_generalized_singles(block, n_spin_orbitals);
        append_generalized_doubles(block, n_spin_orbitals);
        ansatz.blocks.push_back(std::move(block));
        break;
    }
    case AnsatzKind::Upccsd: {
        std::vector<Excitation> block;
        append_occ_virt_singles(block, o);
        std::vector<int> paired, empty;
        for (int p = 0; p < n_spatial; ++p) {
            if (p < std::min(n_alpha, n_beta)) paired.push_back(p);
            if (p >= std::max(n_alpha, n_beta)) empty.push_back(p);
        }
        append_pair_doubles(block, paired, empty);
        ansatz.blocks.push_back(std::move(block));
        break;
    }
    case AnsatzKind::KUpccgsd: {
        std::vector<Excitation> block;
        append_generalized_singles(block, n_spin_orbitals);
        std::vector<int> all(n_spatial);
        std::iota(all.begin(), all.end(), 0);
        append_pair_doubles(block, all, all);
        for (int b = 0; b < k; ++b) ansatz.blocks.push_back(block);
        break;
    }
    }
    for (const auto& block : ansatz.blocks)
        for (const auto& exc : block) validate_excitation(exc, n_spin_orbitals);
    return ansatz;
}

MultiDetReference aufbau_reference(int n_spin_orbitals, int n_alpha, int n_beta) {
    if (n_spin_orbitals <= 0 || n_spin_orbitals % 2 != 0)
        throw std::invalid_argument("reference: spin-orbital count must be positive and even");
    const int n_spatial = n_spin_orbitals / 2;
    if (n_alpha < 0 || n_beta < 0 || n_alpha > n_spatial || n_beta > n_spatial)
        throw std::invalid_argument("reference: occupation exceeds available orbitals");
    Determinant mask = 0;
    for (int p = 0; p < n_alpha; ++p) mask |= Determinant{1} << (2 * p);
    for (int p = 0; p < n_beta; ++p) mask |= Determinant{1} << (2 * p + 1);
    return MultiDetReference{{{mask, 1.0}}};
}

MultiDetReference singly_excited_reference(int n_spin_orbitals, int n_alpha, int n_beta,
                                           std::span<const std::pair<int, int>> promotions) {
    if (promotions.empty())
        throw std::invalid_argument("reference: needs at least one promotion");
    const Determinant aufbau = aufbau_reference(n_spin_orbitals, n_alpha, n_beta).terms[0].first;
    MultiDetReference ref;
    for (const auto& [i, a] : promotions) {
        const bool i_paired = i >= 0 && i < std::min(n_alpha, n_beta);
        const bool a_empty = a >= std::max(n_alpha, n_beta) && 2 * a + 1 < n_spin_orbitals;
        if (!i_paired || !a_empty)
            throw std::invalid_argument(
                "reference: promotion from unoccupied or into occupied spatial orbital");
        const Determinant alpha_det =
            (aufbau & ~(Determinant{1} << (2 * i))) | (Determinant{1} << (2 * a));
        const Determinant beta_det =
            (aufbau & ~(Determinant{1} << (2 * i + 1))) | (Determinant{1} << (2 * a + 1));
        ref.terms.emplace_back(alpha_det, 1.0);
        ref.terms.emplace_back(beta_det, 1.0);
    }
    const double norm = std::sqrt(static_cast<double>(ref.terms.size()));
    for (auto& [mask, coeff] : ref.terms) coeff /= norm;
    return ref;
}

Eigen::VectorXd reference_vector(const MultiDetReference& reference, const SectorBasis& basis) {
    if (reference.terms.empty())
        throw std::invalid_argument("reference: empty determinant expansion");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [mask, coeff] : reference.terms)
        v[static_cast<Eigen::Index>(basis.index_of(mask))] += coeff;
    const double norm = v.norm();
    if (norm == 0.0) throw std::invalid_argument("reference: cancels to the zero vector");
    return v / norm;
}

StatePreparer::StatePreparer(Ansatz ansatz, MultiDetReference reference, SectorBasisPtr basis)
    : ansatz_(std::move(ansatz)), reference_terms_(std::move(reference)),
      basis_(std::move(basis)) {
    if (!basis_) throw std::invalid_argument("state preparer: null basis");
    if (ansatz_.n_spin_orbitals != basis_->n_spin_orbitals() ||
        ansatz_.n_alpha != basis_->n_alpha() || ansatz_.n_beta != basis_->n_beta())
        throw std::invalid_argument("state preparer: ansatz and basis sector mismatch");
    reference_vector_ = reference_vector(reference_terms_, *basis_);
    triplets_.resize(ansatz_.blocks.size());
    for (std::size_t b = 0; b < ansatz_.blocks.size(); ++b) {
        triplets_[b].reserve(ansatz_.blocks[b].size());
        for (const auto& exc : ansatz_.blocks[b])
            triplets_[b].push_back(excitation_generator_triplets(exc, *basis_));
    }
}

SparseGenerator StatePreparer::block_generator(int block, const Eigen::VectorXd& params) const {
    const int dim = static_cast<int>(basis_->size());
    const int offset = ansatz_.block_offset(block);
    std::vector<GeneratorTriplet> scaled;
    for (std::size_t mu = 0; mu < triplets_[block].size(); ++mu) {
        const double t = params[offset + static_cast<Eigen::Index>(mu)];
        if (t == 0.0) continue;
        for (const auto& trip : triplets_[block][mu])
            scaled.emplace_back(trip.row(), trip.col(), t * trip.value());
    }
    SparseGenerator g(dim, dim);
    g.setFromTriplets(scaled.begin(), scaled.end());
    return g;
}

Eigen::VectorXd StatePreparer::prepare(const Eigen::VectorXd& params) const {
    if (params.size() != ansatz_.n_params())
        throw std::invalid_argument("state preparer: parameter count mismatch");
    Eigen::VectorXd w = reference_vector_;
    for (int b = 0; b < ansatz_.n_blocks(); ++b) w = expmv(block_generator(b, params), w);
    return w;
}

double StatePreparer::quadratic_form(const Eigen::MatrixXd& m,
                                     const Eigen::VectorXd& params) const {
    const Eigen::VectorXd psi = prepare(params);
    return psi.dot(m * psi);
}

std::pair<double, Eigen::VectorXd> StatePreparer::quadratic_form_with_gradient(
    const Eigen::MatrixXd& m, const Eigen::VectorXd& params) const {
    if (params.size() != ansatz_.n_params())
        throw std::invalid_argument("state preparer: parameter count mismatch");
    const int n_blocks = ansatz_.n_blocks();
    const int dim = static_cast<int>(basis_->size());

    std::vector<Eigen::VectorXd> forward(n_blocks + 1);
    forward[0] = reference_vector_;
    std::vector<SparseGenerator> generators(n_blocks);
    for (int b = 0; b < n_blocks; ++b) {
        generators[b] = block_generator(b, params);
        forward[b + 1] = expmv(generators[b], forward[b]);
    }
    const double value = forward[n_blocks].dot(m * forward[n_blocks]);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    // y_b carries M psi pulled back through the blocks above b
    Eigen::VectorXd y = m * forward[n_blocks];
    for (int b = n_blocks - 1; b >= 0; --b) {
        const int offset = ansatz_.block_offset(b);
        // scaled block triplets shared by every doubled matrix of this block
        std::vector<GeneratorTriplet> doubled_base;
        for (std::size_t mu = 0; mu < triplets_[b].size(); ++mu) {
            const double t = params[offset + static_cast<Eigen::Index>(mu)];
            if (t == 0.0) continue;
            for (const auto& trip : triplets_[b][mu]) {
                doubled_base.emplace_back(trip.row(), trip.col(), t * trip.value());
                doubled_base.emplace_back(trip.row() + dim, trip.col() + dim, t * trip.value());
            }
        }
        Eigen::VectorXd stacked = Eigen::VectorXd::Zero(2 * dim);
        stacked.tail(dim) = forward[b];
        for (std::size_t mu = 0; mu < triplets_[b].size(); ++mu) {
            // exp([[G, G_mu], [0, G]]) [0; f] = [dexp_G(G_mu) f; exp(G) f]
            std::vector<GeneratorTriplet> doubled = doubled_base;
            for (const auto& trip : triplets_[b][mu])
                doubled.emplace_back(trip.row(), trip.col() + dim, trip.value());
            SparseGenerator big(2 * dim, 2 * dim);
            big.setFromTriplets(doubled.begin(), doubled.end());
            const Eigen::VectorXd derivative = expmv(big, stacked).head(dim);
            grad[offset + static_cast<Eigen::Index>(mu)] = 2.0 * y.dot(derivative);
        }
        if (b > 0) y = expmv(SparseGenerator(-generators[b]), y);
    }
    return {value, grad};
}

StateVector prepare_state(const Ansatz& ansatz, const Eigen::VectorXd& params,
                          const MultiDetReference& reference, SectorBasisPtr basis) {
    StatePreparer preparer(ansatz, reference, basis);
    return StateVector{std::move(basis), preparer.prepare(params)};
}

} // namespace uccvqe
