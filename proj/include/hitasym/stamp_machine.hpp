#pragma once

#include "hitasym/conditions.hpp"
#include "hitasym/cyclic_system.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitasym {

/// Run-length description of a rational F: the return times k_1 < ... < k_s
/// and the jump numerators p_1 > ... > p_s over the period q.
struct StampParams {
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::vector<std::uint64_t> k;
    std::vector<std::uint64_t> pvals;

    /// Number of gaps of length k[j] in the stamp: p_j - p_{j+1}.
    [[nodiscard]] std::uint64_t multiplicity(std::size_t j) const {
        return pvals[j] - (j + 1 < pvals.size() ? pvals[j + 1] : 0);
    }

    void validate() const {
        if (k.empty() || k.size() != pvals.size())
            throw std::invalid_argument("StampParams: k and pvals must be nonempty and of equal length");
        if (p != pvals.front()) throw std::invalid_argument("StampParams: p must equal p_1");
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (k[j] == 0 || pvals[j] == 0) throw std::invalid_argument("StampParams: entries must be positive");
            if (j > 0 && !(k[j - 1] < k[j])) throw std::invalid_argument("StampParams: k not increasing");
            if (j > 0 && !(pvals[j - 1] > pvals[j]))
                throw std::invalid_argument("StampParams: pvals not decreasing");
        }
        mpz_class sum;
        for (std::size_t j = 0; j < k.size(); ++j) sum += from_u64(k[j]) * from_u64(multiplicity(j));
        if (sum != from_u64(q))
            throw std::invalid_argument("StampParams: q-identity fails (" + sum.get_str() +
                                        " != " + std::to_string(q) + ")");
    }

    friend bool operator==(const StampParams&, const StampParams&) = default;
};

/// A height-q marking pattern; offsets are 0-based from the stamp's base.
struct Stamp {
    std::uint64_t height = 0;
    std::vector<std::uint64_t> marked_offsets;
    friend bool operator==(const Stamp&, const Stamp&) = default;
};

inline StampParams derive_params(const RationalF& f) {
    StampParams sp{f.q(), f.p(), f.run_ends(), f.run_values()};
    sp.validate();
    return sp;
}

/// Periodic system realizing F: start at residue 1 and step k_j, p_j - p_{j+1}
/// times for each run but the last, then p_s - 1 times by k_s. The final
/// k_s step wraps back to 1 and closes the cycle.
inline CyclicSystem build_system(const StampParams& sp) {
    sp.validate();
    std::vector<std::uint64_t> U;
    U.reserve(sp.p);
    std::uint64_t x = 1;
    U.push_back(x);
    for (std::size_t j = 0; j < sp.k.size(); ++j) {
        std::uint64_t steps = sp.multiplicity(j);
        if (j + 1 == sp.k.size()) --steps;
        for (std::uint64_t i = 0; i < steps; ++i) {
            x += sp.k[j];
            U.push_back(x);
        }
    }
    if (x + sp.k.back() != sp.q + 1) throw std::logic_error("build_system: stamp does not close up");
    return CyclicSystem(sp.q, std::move(U));
}

inline Stamp make_stamp(const StampParams& sp) {
    auto sys = build_system(sp);
    Stamp s{sp.q, {}};
    s.marked_offsets.reserve(sys.marked().size());
    for (auto u : sys.marked()) s.marked_offsets.push_back(u - 1);
    return s;
}

/// hitting_cdf(build_system(derive_params(f))) == f, jump by jump.
inline bool verify_roundtrip(const RationalF& f) {
    return hitting_cdf(build_system(derive_params(f))) == f.step_cdf();
}

} // namespace hitasym
