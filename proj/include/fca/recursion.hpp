#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fca/poly_matrix.hpp"

namespace fca {

/// Preperiod M and period N of the Frobenius iteration x -> x^p on Z_{p^l};
/// every element satisfies x^{p^{M+N}} == x^{p^M}, and k = p^N is the
/// contraction ratio of the substitution system.
struct FrobeniusPeriod {
    uint32_t preperiod = 0;  // M
    uint32_t period = 1;     // N
    uint64_t k = 2;          // p^N
};

FrobeniusPeriod frobenius_period(const ResidueRing& ring);

/// The derived scaling law T^{k^n m'} = sum_{i,j} mu_{i,j} u^{k^n i} T^{k^n j},
/// valid for every n >= 0.
struct Relation {
    ResidueRing ring;
    uint64_t k = 2;
    int64_t m_prime = 1;
    int64_t m = 1;  // degree of the annihilating polynomial
    /// (shift i, exponent j < m') -> nonzero coefficient mu_{i,j}.
    std::map<std::pair<int64_t, int64_t>, uint64_t> mu;
};

/// Expand the Frobenius-power form of the annihilating relation symbolically
/// in R[U,U^-1][X] and read off the mu table. Pi must annihilate T (checked
/// by the caller via poly_eval).
Relation derive_relation(const MonicPoly& pi, const ResidueRing& ring);

struct LeafTerm {
    int64_t delta;   // spatial offset
    int64_t jprime;  // leaf exponent, < m'
    uint64_t coeff;  // nonzero ring element
};

/// For each (j, t), the full decomposition of Xi^{k j + t}_x as
/// sum coeff * Xi^{j'}_{x+delta} with all exponents below m'.
struct LeafTables {
    uint64_t k = 2;
    int64_t m_prime = 1;
    /// Indexed [j * k + t]; terms sorted by (jprime, delta).
    std::vector<std::vector<LeafTerm>> tables;

    const std::vector<LeafTerm>& table(int64_t j, uint64_t t) const {
        return tables[static_cast<size_t>(j * static_cast<int64_t>(k) + static_cast<int64_t>(t))];
    }
};

LeafTables leaf_tables(const Relation& rel);

/// Grouping window: a block at position x carries the coefficients
/// alpha_j(x + o, y) for o in [lo, hi]. `raw_min/raw_max` are the extreme
/// leaf-table offsets; the default window is the safe linear bound, the
/// refined one is the smallest window closed under the child maps.
struct Window {
    int64_t raw_min = 0;
    int64_t raw_max = 0;
    int64_t lo = 0;
    int64_t hi = 0;

    int64_t width() const { return hi - lo + 1; }
    bool contains(int64_t o) const { return o >= lo && o <= hi; }
};

/// Exact closure test: every input offset (s + o + delta) / k needed by a
/// child map lands back inside [lo, hi].
bool window_is_closed(const LeafTables& tables, uint64_t k, int64_t lo, int64_t hi);

/// Default: safe bound hi = ceil((raw_max + k - 1) / (k - 1)),
/// lo = floor(raw_min / (k - 1)). With `refined`, search for the smallest
/// closed window instead.
Window compute_window(const LeafTables& tables, uint64_t k, bool refined = false);

}  // namespace fca
