#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "uccvqe/excitation.hpp"
#include "uccvqe/fock.hpp"

namespace uccvqe {

enum class AnsatzKind { Uccsd, Uccgsd, Upccsd, KUpccgsd };

AnsatzKind ansatz_kind_from_string(const std::string& name);
std::string to_string(AnsatzKind kind);

// An ordered list of excitation blocks. The prepared state is
//   prod_{b = k..1} exp(G_b(t)) |reference>,
// block 1 applied first. Every block carries independent amplitudes; the
// parameter vector is the concatenation [block 1 | block 2 | ...].
struct Ansatz {
    AnsatzKind kind = AnsatzKind::Uccsd;
    int n_spin_orbitals = 0;
    int n_alpha = 0;
    int n_beta = 0;
    int k = 1;
    std::vector<std::vector<Excitation>> blocks;

    int n_params() const;
    int n_blocks() const { return static_cast<int>(blocks.size()); }
    // Offset of block b's amplitudes inside the parameter vector.
    int block_offset(int b) const;
};

// Builds the excitation lists for one of the four supported families:
//   Uccsd     occupied->virtual same-spin singles and projection-conserving
//             doubles relative to the aufbau determinant, one block
//   Uccgsd    generalized singles (all same-spin p < q) and generalized
//             doubles (all spin-class-matched pairs of pairs), one block
//   Upccsd    Uccsd singles plus PairDouble over doubly-occupied ->
//             doubly-empty spatial pairs, one block
//   KUpccgsd  k identical blocks of generalized singles plus PairDouble over
//             all spatial P < Q
// k is only meaningful for KUpccgsd and must be >= 1 there (and 1 elsewhere).
Ansatz build_ansatz(AnsatzKind kind, int n_spin_orbitals, int n_alpha, int n_beta, int k = 1);

// Reference state as a normalized determinant expansion.
struct MultiDetReference {
    std::vector<std::pair<Determinant, double>> terms;
};

// Lowest-index-first filling: alpha spatial 0..n_alpha-1, beta 0..n_beta-1.
MultiDetReference aufbau_reference(int n_spin_orbitals, int n_alpha, int n_beta);

// Equal-weight combination of spin-adapted single promotions i->a (spatial)
// applied to the aufbau determinant; each promotion contributes its alpha- and
// beta-excited determinant. Promotion sources must be doubly occupied and
// targets doubly empty in the aufbau determinant.
MultiDetReference singly_excited_reference(int n_spin_orbitals, int n_alpha, int n_beta,
                                           std::span<const std::pair<int, int>> promotions);

// Dense coefficient vector of the reference; throws when a determinant lies
// outside the sector.
Eigen::VectorXd reference_vector(const MultiDetReference& reference, const SectorBasis& basis);

// Caches per-excitation generator sparsity for one (ansatz, reference, basis)
// triple so repeated preparations and derivatives only rescale values.
class StatePreparer {
  public:
    StatePreparer(Ansatz ansatz, MultiDetReference reference, SectorBasisPtr basis);

    const Ansatz& ansatz() const { return ansatz_; }
    const SectorBasisPtr& basis() const { return basis_; }
    const Eigen::VectorXd& reference() const { return reference_vector_; }

    Eigen::VectorXd prepare(const Eigen::VectorXd& params) const;

    // <psi(t)| M |psi(t)>
    double quadratic_form(const Eigen::MatrixXd& m, const Eigen::VectorXd& params) const;

    // Value and exact gradient of the quadratic form. The derivative of each
    // block exponential is evaluated through the doubled-matrix construction
    // exp([[G, G_mu], [0, G]]) acting on the stacked vector [0; f], whose top
    // half is the directional derivative of exp(G) f.
    std::pair<double, Eigen::VectorXd> quadratic_form_with_gradient(
        const Eigen::MatrixXd& m, const Eigen::VectorXd& params) const;

    SparseGenerator block_generator(int block, const Eigen::VectorXd& params) const;

  private:
    Ansatz ansatz_;
    MultiDetReference reference_terms_;
    SectorBasisPtr basis_;
    Eigen::VectorXd reference_vector_;
    // triplets per block, per excitation
    std::vector<std::vector<std::vector<GeneratorTriplet>>> triplets_;
};

// One-shot preparation; equivalent to StatePreparer(...).prepare(params).
StateVector prepare_state(const Ansatz& ansatz, const Eigen::VectorXd& params,
                          const MultiDetReference& reference, SectorBasisPtr basis);

} // namespace uccvqe
