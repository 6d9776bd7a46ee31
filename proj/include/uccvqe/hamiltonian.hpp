#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uccvqe/fock.hpp"

namespace uccvqe {

// Spin-free electronic Hamiltonian in an orthonormal spatial-orbital basis:
// core energy, one-body integrals h_pq, and two-body integrals in chemists'
// notation (pq|rs) with the full 8-fold permutational symmetry stored
// explicitly (every write goes through set_eri which completes the class).
struct MolecularHamiltonian {
    int n_spatial = 0;
    int n_electrons = 0;
    int ms2 = 0;
    double core_energy = 0.0;
    Eigen::MatrixXd one_body;        // n_spatial x n_spatial, symmetric
    std::vector<double> two_body;    // flat n^4, chemists' (pq|rs)

    MolecularHamiltonian() = default;
    MolecularHamiltonian(int n_spatial, int n_electrons, int ms2);

    double eri(int p, int q, int r, int s) const {
        const int n = n_spatial;
        return two_body[((p * n + q) * n + r) * n + s];
    }
    // Writes (pq|rs) to all eight permutational images.
    void set_eri(int p, int q, int r, int s, double value);

    int n_spin_orbitals() const { return 2 * n_spatial; }
    int default_n_alpha() const { return (n_electrons + ms2) / 2; }
    int default_n_beta() const { return (n_electrons - ms2) / 2; }

    // Throws std::invalid_argument when a structural invariant is broken
    // (shape mismatch, asymmetric h, electron-count/ms2 inconsistency).
    void validate() const;
};

// FCIDUMP reader. Header: "&FCI NORB=..,NELEC=..,MS2=.., ... &END" with
// case-insensitive keys, unknown keys ignored. Records are
// "value i j k l" (1-indexed): i j 0 0 is one-body, 0 0 0 0 the core energy,
// otherwise two-body in chemists' order. Any stored representative fills its
// symmetry class; duplicate records conflicting beyond 1e-10 Hartree throw.
MolecularHamiltonian parse_fcidump(std::istream& in);
MolecularHamiltonian parse_fcidump_file(const std::string& path);

// Emits one representative per 8-fold symmetry class with |value| > 1e-12,
// full round-trip precision. parse(write(h)) reproduces the stored values
// bit-identically.
void write_fcidump(const MolecularHamiltonian& h, std::ostream& out);
void write_fcidump_file(const MolecularHamiltonian& h, const std::string& path);

// Open-boundary one-dimensional Hubbard chain in the site basis:
// h_{i,i+1} = -t and (ii|ii) = U, everything else zero. Half filling:
// n_electrons = n_sites, ms2 = parity of n_sites.
MolecularHamiltonian hubbard_hamiltonian(int n_sites, double t, double u);

// Dense Hamiltonian matrix over an explicit determinant list. Built by direct
// second-quantized application, so signs follow the same parity rule as the
// excitation generators. Matrix elements follow the Slater-Condon structure
// (nonzero only between determinants at most two spin orbitals apart).
Eigen::MatrixXd hamiltonian_matrix(const MolecularHamiltonian& h,
                                   std::span<const Determinant> determinants);

// Same over a full particle sector, core_energy included on the diagonal.
Eigen::MatrixXd sector_matrix(const MolecularHamiltonian& h, const SectorBasis& basis);

} // namespace uccvqe
