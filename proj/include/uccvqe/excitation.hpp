#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace uccvqe {

// Spin-orbital convention used throughout: spin orbital s = 2*spatial + spin
// with spin 0 = alpha, 1 = beta, so even bits are alpha and odd bits are beta.
inline int spatial_of(int spin_orbital) { return spin_orbital >> 1; }
inline int spin_of(int spin_orbital) { return spin_orbital & 1; }
inline int spin_orbital(int spatial, int spin) { return 2 * spatial + spin; }

enum class ExcitationKind { Single, Double, PairDouble };

// One cluster-operator term tau. The anti-Hermitian generator applied by the
// state preparer is always tau - tau^dagger, so each Excitation carries one
// real amplitude.
//
//   Single(p, q):      tau = a+_q a_p, spin orbitals p < q of equal spin.
//   Double(i,j,a,b):   tau = a+_a a+_b a_j a_i, i < j, a < b, (i,j) < (a,b)
//                      lexicographically, spin multiset of {i,j} equal to that
//                      of {a,b} (projection-conserving only).
//   PairDouble(P, Q):  tau = a+_{Qa} a+_{Qb} a_{Pb} a_{Pa}, spatial P < Q.
struct Excitation {
    ExcitationKind kind = ExcitationKind::Single;
    std::array<int, 4> idx{-1, -1, -1, -1};

    static Excitation single(int p, int q) {
        return {ExcitationKind::Single, {p, q, -1, -1}};
    }
    static Excitation dble(int i, int j, int a, int b) {
        return {ExcitationKind::Double, {i, j, a, b}};
    }
    static Excitation pair_double(int spatial_p, int spatial_q) {
        return {ExcitationKind::PairDouble, {spatial_p, spatial_q, -1, -1}};
    }

    bool operator==(const Excitation& other) const = default;
};

// Throws std::invalid_argument when exc violates the canonical-form rules
// above or indexes outside n_spin_orbitals.
void validate_excitation(const Excitation& exc, int n_spin_orbitals);

// Spin orbitals touched by the term, duplicate-free; the unit a circuit term
// would act on. PairDouble(P, Q) occupies {2P, 2P+1, 2Q, 2Q+1}.
std::vector<int> excitation_support(const Excitation& exc);

std::string to_string(const Excitation& exc);

} // namespace uccvqe
