#include "uccvqe/hamiltonian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace uccvqe {

namespace {

constexpr double kDuplicateTolerance = 1e-10; // conflicting duplicate records
constexpr double kWriteThreshold = 1e-12;     // dropped on emission

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

} // namespace

MolecularHamiltonian::MolecularHamiltonian(int n_spatial_, int n_electrons_, int ms2_)
    : n_spatial(n_spatial_), n_electrons(n_electrons_), ms2(ms2_) {
    if (n_spatial <= 0) throw std::invalid_argument("hamiltonian: need at least one orbital");
    one_body = Eigen::MatrixXd::Zero(n_spatial, n_spatial);
    two_body.assign(static_cast<std::size_t>(n_spatial) * n_spatial * n_spatial * n_spatial, 0.0);
}

void MolecularHamiltonian::set_eri(int p, int q, int r, int s, double value) {
    const int n = n_spatial;
    auto at = [&](int a, int b, int c, int d) -> double& {
        return two_body[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
    };
    // chemists' 8-fold class of (pq|rs)
    at(p, q, r, s) = value;
    at(q, p, r, s) = value;
    at(p, q, s, r) = value;
    at(q, p, s, r) = value;
    at(r, s, p, q) = value;
    at(s, r, p, q) = value;
    at(r, s, q, p) = value;
    at(s, r, q, p) = value;
}

void MolecularHamiltonian::validate() const {
    if (n_spatial <= 0) throw std::invalid_argument("hamiltonian: empty orbital space");
    if (one_body.rows() != n_spatial || one_body.cols() != n_spatial)
        throw std::invalid_argument("hamiltonian: one-body shape mismatch");
    const auto n4 = static_cast<std::size_t>(n_spatial) * n_spatial * n_spatial * n_spatial;
    if (two_body.size() != n4)
        throw std::invalid_argument("hamiltonian: two-body shape mismatch");
    if (one_body != one_body.transpose().eval())
        throw std::invalid_argument("hamiltonian: one-body integrals must be symmetric");
    for (int p = 0; p < n_spatial; ++p)
        for (int q = 0; q < n_spatial; ++q)
            for (int r = 0; r < n_spatial; ++r)
                for (int s = 0; s < n_spatial; ++s) {
                    const double v = eri(p, q, r, s);
                    if (v != eri(q, p, r, s) || v != eri(p, q, s, r) || v != eri(r, s, p, q))
                        throw std::invalid_argument(
                            "hamiltonian: two-body integrals break 8-fold symmetry");
                }
    if (n_electrons < 0 || n_electrons > 2 * n_spatial)
        throw std::invalid_argument("hamiltonian: electron count out of range");
    if (std::abs(ms2) > n_electrons || (n_electrons - ms2) % 2 != 0)
        throw std::invalid_argument("hamiltonian: MS2 inconsistent with electron count");
}

namespace {

struct RecordSeen {
    bool core = false;
    std::vector<bool> one;
    std::vector<bool> two;
};

void store_one_body(MolecularHamiltonian& h, RecordSeen& seen, int i, int j, double v) {
    const int n = h.n_spatial;
    if (seen.one[i * n + j]) {
        if (std::abs(h.one_body(i, j) - v) > kDuplicateTolerance) {
            std::ostringstream msg;
            msg << "fcidump: conflicting duplicate one-body record (" << i + 1 << "," << j + 1
                << ")";
            throw std::runtime_error(msg.str());
        }
        return;
    }
    h.one_body(i, j) = v;
    h.one_body(j, i) = v;
    seen.one[i * n + j] = seen.one[j * n + i] = true;
}

void store_two_body(MolecularHamiltonian& h, RecordSeen& seen, int p, int q, int r, int s,
                    double v) {
    const int n = h.n_spatial;
    auto flat = [&](int a, int b, int c, int d) {
        return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
    };
    if (seen.two[flat(p, q, r, s)]) {
        if (std::abs(h.eri(p, q, r, s) - v) > kDuplicateTolerance) {
            std::ostringstream msg;
            msg << "fcidump: conflicting duplicate two-body record (" << p + 1 << "," << q + 1
                << "," << r + 1 << "," << s + 1 << ")";
            throw std::runtime_error(msg.str());
        }
        return;
    }
    h.set_eri(p, q, r, s, v);
    const int quads[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                             {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
    for (const auto& u : quads) seen.two[flat(u[0], u[1], u[2], u[3])] = true;
}

} // namespace

MolecularHamiltonian parse_fcidump(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string upper_text = upper(text);

    const auto fci_pos = upper_text.find("&FCI");
    if (fci_pos == std::string::npos)
        throw std::runtime_error("fcidump: missing &FCI header");
    auto end_pos = upper_text.find("&END", fci_pos + 4);
    std::size_t body_start;
    const auto slash_pos = upper_text.find('/', fci_pos + 4);
    if (slash_pos != std::string::npos && (end_pos == std::string::npos || slash_pos < end_pos)) {
        end_pos = slash_pos;
        body_start = slash_pos + 1;
    } else if (end_pos != std::string::npos) {
        body_start = end_pos + 4;
    } else {
        throw std::runtime_error("fcidump: header not terminated by &END");
    }

    // normalize "KEY = VALUE" to "KEY=VALUE", then split on commas/whitespace
    const std::string header = text.substr(fci_pos + 4, end_pos - fci_pos - 4);
    std::string squeezed;
    squeezed.reserve(header.size());
    for (std::size_t i = 0; i < header.size();) {
        if (std::isspace(static_cast<unsigned char>(header[i]))) {
            std::size_t j = i;
            while (j < header.size() && std::isspace(static_cast<unsigned char>(header[j]))) ++j;
            const bool around_eq = (j < header.size() && header[j] == '=') ||
                                   (!squeezed.empty() && squeezed.back() == '=');
            if (!around_eq) squeezed.push_back(' ');
            i = j;
        } else {
            squeezed.push_back(header[i++]);
        }
    }
    std::optional<int> norb, nelec, ms2;
    std::istringstream header_stream(squeezed);
    std::string token;
    while (std::getline(header_stream, token, ' ')) {
        std::istringstream comma_stream(token);
        std::string item;
        while (std::getline(comma_stream, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) continue; // list continuation of an ignored key
            const std::string key = upper(item.substr(0, eq));
            const std::string value = item.substr(eq + 1);
            if (key != "NORB" && key != "NELEC" && key != "MS2") continue;
            int parsed = 0;
            try {
                std::size_t used = 0;
                parsed = std::stoi(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw std::runtime_error("fcidump: malformed header value for " + key);
            }
            if (key == "NORB") norb = parsed;
            else if (key == "NELEC") nelec = parsed;
            else ms2 = parsed;
        }
    }
    if (!norb || !nelec || !ms2)
        throw std::runtime_error("fcidump: header must declare NORB, NELEC and MS2");
    if (*norb < 1 || *norb > 64)
        throw std::runtime_error("fcidump: NORB out of supported range [1, 64]");

    MolecularHamiltonian h(*norb, *nelec, *ms2);
    RecordSeen seen;
    seen.one.assign(static_cast<std::size_t>(*norb) * *norb, false);
    seen.two.assign(h.two_body.size(), false);

    std::istringstream records(text.substr(body_start));
    std::string value_token;
    while (records >> value_token) {
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(value_token, &used);
            if (used != value_token.size()) throw std::invalid_argument(value_token);
        } catch (const std::exception&) {
            throw std::runtime_error("fcidump: non-numeric value field '" + value_token + "'");
        }
        int idx[4];
        for (auto& v : idx) {
            std::string t;
            if (!(records >> t)) throw std::runtime_error("fcidump: truncated record");
            try {
                std::size_t used = 0;
                v = std::stoi(t, &used);
                if (used != t.size()) throw std::invalid_argument(t);
            } catch (const std::exception&) {
                throw std::runtime_error("fcidump: non-numeric index field '" + t + "'");
            }
            if (v < 0 || v > *norb)
                throw std::runtime_error("fcidump: orbital index out of range");
        }
        const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            if (seen.core && std::abs(h.core_energy - value) > kDuplicateTolerance)
                throw std::runtime_error("fcidump: conflicting duplicate core-energy record");
            if (!seen.core) h.core_energy = value;
            seen.core = true;
        } else if (k == 0 && l == 0 && i > 0 && j > 0) {
            store_one_body(h, seen, i - 1, j - 1, value);
        } else if (i > 0 && j > 0 && k > 0 && l > 0) {
            store_two_body(h, seen, i - 1, j - 1, k - 1, l - 1, value);
        } else {
            throw std::runtime_error("fcidump: orbital index out of range");
        }
    }
    h.validate();
    return h;
}

MolecularHamiltonian parse_fcidump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("fcidump: cannot open '" + path + "'");
    return parse_fcidump(in);
}

void write_fcidump(const MolecularHamiltonian& h, std::ostream& out) {
    h.validate();
    out << "&FCI NORB=" << h.n_spatial << ",NELEC=" << h.n_electrons << ",MS2=" << h.ms2 << ",\n";
    out << "&END\n";
    char line[128];
    auto emit = [&](double v, int i, int j, int k, int l) {
        std::snprintf(line, sizeof line, "%24.16E %4d %4d %4d %4d\n", v, i, j, k, l);
        out << line;
    };
    // one representative per 8-fold class: p >= q, r >= s, (pq) >= (rs)
    for (int p = 0; p < h.n_spatial; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (r == p && s > q) continue;
                    const double v = h.eri(p, q, r, s);
                    if (std::abs(v) > kWriteThreshold) emit(v, p + 1, q + 1, r + 1, s + 1);
                }
    for (int p = 0; p < h.n_spatial; ++p)
        for (int q = 0; q <= p; ++q)
            if (std::abs(h.one_body(p, q)) > kWriteThreshold)
                emit(h.one_body(p, q), p + 1, q + 1, 0, 0);
    if (std::abs(h.core_energy) > kWriteThreshold) emit(h.core_energy, 0, 0, 0, 0);
}

void write_fcidump_file(const MolecularHamiltonian& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("fcidump: cannot write '" + path + "'");
    write_fcidump(h, out);
}

MolecularHamiltonian hubbard_hamiltonian(int n_sites, double t, double u) {
    if (n_sites < 1) throw std::invalid_argument("hubbard: need at least one site");
    if (n_sites > 32) throw std::invalid_argument("hubbard: site count exceeds 32");
    MolecularHamiltonian h(n_sites, n_sites, n_sites % 2);
    for (int i = 0; i + 1 < n_sites; ++i) {
        h.one_body(i, i + 1) = -t;
        h.one_body(i + 1, i) = -t;
    }
    for (int i = 0; i < n_sites; ++i) h.set_eri(i, i, i, i, u);
    return h;
}

Eigen::MatrixXd hamiltonian_matrix(const MolecularHamiltonian& h,
                                   std::span<const Determinant> determinants) {
    h.validate();
    const int n = h.n_spatial;
    const int n_so = 2 * n;
    std::unordered_map<Determinant, std::size_t> index;
    index.reserve(determinants.size());
    for (std::size_t i = 0; i < determinants.size(); ++i) {
        if (determinants[i] >> n_so)
            throw std::invalid_argument("hamiltonian matrix: determinant outside orbital space");
        index[determinants[i]] = i;
    }
    const auto dim = static_cast<Eigen::Index>(determinants.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);

    std::vector<int> occupied;
    occupied.reserve(n_so);
    for (std::size_t col = 0; col < determinants.size(); ++col) {
        const Determinant d = determinants[col];
        occupied.clear();
        for (int s = 0; s < n_so; ++s)
            if (d & (Determinant{1} << s)) occupied.push_back(s);

        auto add = [&](Determinant target, double v) {
            const auto it = index.find(target);
            if (it != index.end()) m(static_cast<Eigen::Index>(it->second), col) += v;
        };

        // sum_{pq,sigma} h_pq a+_{p sigma} a_{q sigma}
        for (const int so_q : occupied) {
            const auto after_q = annihilate(d, so_q);
            const int sigma = spin_of(so_q), q = spatial_of(so_q);
            for (int p = 0; p < n; ++p) {
                const double hpq = h.one_body(p, q);
                if (hpq == 0.0) continue;
                const auto done = create(after_q->mask, spin_orbital(p, sigma));
                if (!done) continue;
                add(done->mask, hpq * after_q->sign * done->sign);
            }
        }

        // 1/2 sum_{pqrs,sigma tau} (pq|rs) a+_{p sigma} a+_{r tau} a_{s tau} a_{q sigma}
        for (const int so_q : occupied) {
            const auto after_q = annihilate(d, so_q);
            const int sigma = spin_of(so_q), q = spatial_of(so_q);
            for (int so_s = 0; so_s < n_so; ++so_s) {
                const auto after_s = annihilate(after_q->mask, so_s);
                if (!after_s) continue;
                const int tau = spin_of(so_s), s = spatial_of(so_s);
                for (int r = 0; r < n; ++r) {
                    const auto after_r = create(after_s->mask, spin_orbital(r, tau));
                    if (!after_r) continue;
                    for (int p = 0; p < n; ++p) {
                        const double eri = h.eri(p, q, r, s);
                        if (eri == 0.0) continue;
                        const auto done = create(after_r->mask, spin_orbital(p, sigma));
                        if (!done) continue;
                        add(done->mask, 0.5 * eri * after_q->sign * after_s->sign *
                                            after_r->sign * done->sign);
                    }
                }
            }
        }

        m(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) += h.core_energy;
    }
    return m;
}

Eigen::MatrixXd sector_matrix(const MolecularHamiltonian& h, const SectorBasis& basis) {
    if (basis.n_spin_orbitals() != 2 * h.n_spatial)
        throw std::invalid_argument("sector matrix: basis orbital count mismatch");
    // a sector's electron count may differ from the header NELEC when the
    // caller overrode the sector; the matrix is well defined either way
    return hamiltonian_matrix(h, basis.determinants());
}

} // namespace uccvqe
