#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "uccvqe/excitation.hpp"

namespace uccvqe {

// A Slater determinant as an occupation bitmask over spin orbitals. Bit s set
// means spin orbital s occupied; the determinant is the ordered product of
// creation operators with ascending index applied to the vacuum.
using Determinant = std::uint64_t;

// Fermionic phase picked up by a_p / a+_p acting through the orbitals below p:
// (-1)^popcount(mask & (2^p - 1)).
inline int parity_below(Determinant mask, int p) {
    return (std::popcount(mask & ((Determinant{1} << p) - 1)) & 1) ? -1 : 1;
}

struct AppliedDeterminant {
    Determinant mask;
    int sign; // +1 or -1
};

// a_p |mask>. Empty when orbital p is unoccupied.
std::optional<AppliedDeterminant> annihilate(Determinant mask, int p);
// a+_p |mask>. Empty when orbital p is already occupied.
std::optional<AppliedDeterminant> create(Determinant mask, int p);

// tau_exc |mask> for the cluster term of an Excitation (not the anti-Hermitian
// combination). Empty when any factor vanishes.
std::optional<AppliedDeterminant> apply_excitation(const Excitation& exc, Determinant mask);

// All determinants of a fixed (n_alpha, n_beta) particle sector, stored as
// ascending integers. Dimension is C(N/2, n_alpha) * C(N/2, n_beta).
class SectorBasis {
  public:
    SectorBasis(int n_spin_orbitals, int n_alpha, int n_beta);

    int n_spin_orbitals() const { return n_spin_orbitals_; }
    int n_alpha() const { return n_alpha_; }
    int n_beta() const { return n_beta_; }
    std::size_t size() const { return determinants_.size(); }
    Determinant determinant(std::size_t i) const { return determinants_[i]; }
    const std::vector<Determinant>& determinants() const { return determinants_; }

    // Position of mask in the basis; throws std::out_of_range when the mask is
    // not a member of the sector.
    std::size_t index_of(Determinant mask) const;
    bool contains(Determinant mask) const { return index_.count(mask) != 0; }

  private:
    int n_spin_orbitals_;
    int n_alpha_;
    int n_beta_;
    std::vector<Determinant> determinants_;
    std::unordered_map<Determinant, std::size_t> index_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

SectorBasisPtr make_sector_basis(int n_spin_orbitals, int n_alpha, int n_beta);

// Normalized coefficient vector over a SectorBasis, kept together with the
// basis so states from different sectors cannot be mixed silently.
struct StateVector {
    SectorBasisPtr basis;
    Eigen::VectorXd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

using SparseGenerator = Eigen::SparseMatrix<double>;
using GeneratorTriplet = Eigen::Triplet<double>;

// Triplets of the antisymmetric generator G = tau - tau^dagger of one
// excitation over the sector basis. Exposed so callers that assemble many
// parameterized generators can cache the sparsity once.
std::vector<GeneratorTriplet> excitation_generator_triplets(const Excitation& exc,
                                                            const SectorBasis& basis);

// Sparse matrix of tau - tau^dagger for one excitation; exactly antisymmetric.
SparseGenerator excitation_generator(const Excitation& exc, const SectorBasis& basis);

// G = sum_mu params[mu] * (tau_mu - tau_mu^dagger).
SparseGenerator assemble_generator(std::span<const Excitation> excitations,
                                   const Eigen::VectorXd& params,
                                   const SectorBasis& basis);

// w = exp(G) v through matrix-vector products only (scaled truncated Taylor).
// G must be square and match v's dimension. Accuracy is far inside the 1e-12
// relative contract for the generator norms that arise here.
Eigen::VectorXd expmv(const SparseGenerator& generator, const Eigen::VectorXd& v);

StateVector expmv(const SparseGenerator& generator, const StateVector& v);

} // namespace uccvqe
