#include "uccvqe/excitation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace uccvqe {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("excitation: " + what);
}

void check_range(int s, int n_spin_orbitals) {
    require(s >= 0 && s < n_spin_orbitals, "spin-orbital index out of range");
}

} // namespace

void validate_excitation(const Excitation& exc, int n_spin_orbitals) {
    switch (exc.kind) {
    case ExcitationKind::Single: {
        const int p = exc.idx[0], q = exc.idx[1];
        check_range(p, n_spin_orbitals);
        check_range(q, n_spin_orbitals);
        require(p < q, "single requires p < q");
        require(spin_of(p) == spin_of(q), "single must conserve spin");
        break;
    }
    case ExcitationKind::Double: {
        const int i = exc.idx[0], j = exc.idx[1], a = exc.idx[2], b = exc.idx[3];
        for (int s : exc.idx) check_range(s, n_spin_orbitals);
        require(i < j && a < b, "double requires ascending pairs");
        require(std::pair{i, j} < std::pair{a, b}, "double requires (i,j) < (a,b)");
        // projection conservation: equal spin multisets
        require(spin_of(i) + spin_of(j) == spin_of(a) + spin_of(b),
                "double must conserve spin projection");
        break;
    }
    case ExcitationKind::PairDouble: {
        const int sp = exc.idx[0], sq = exc.idx[1];
        require(sp >= 0 && sq >= 0 && 2 * sp + 1 < n_spin_orbitals && 2 * sq + 1 < n_spin_orbitals,
                "spatial index out of range");
        require(sp < sq, "pair double requires P < Q");
        break;
    }
    }
}

std::vector<int> excitation_support(const Excitation& exc) {
    switch (exc.kind) {
    case ExcitationKind::Single:
        return {exc.idx[0], exc.idx[1]};
    case ExcitationKind::Double: {
        // generalized pairs may overlap, e.g. (0,2) -> (2,4) touches 2 once
        std::vector<int> support = {exc.idx[0], exc.idx[1], exc.idx[2], exc.idx[3]};
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        return support;
    }
    case ExcitationKind::PairDouble: {
        const int p = exc.idx[0], q = exc.idx[1];
        return {2 * p, 2 * p + 1, 2 * q, 2 * q + 1};
    }
    }
    return {};
}

std::string to_string(const Excitation& exc) {
    std::ostringstream out;
    switch (exc.kind) {
    case ExcitationKind::Single:
        out << "single(" << exc.idx[0] << "->" << exc.idx[1] << ")";
        break;
    case ExcitationKind::Double:
        out << "double(" << exc.idx[0] << "," << exc.idx[1] << "->" << exc.idx[2] << ","
            << exc.idx[3] << ")";
        break;
    case ExcitationKind::PairDouble:
        out << "pair(" << exc.idx[0] << "->" << exc.idx[1] << ")";
        break;
    }
    return out.str();
}

} // namespace uccvqe
