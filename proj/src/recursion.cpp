#include "fca/recursion.hpp"

#include <cmath>
#include <stdexcept>

#include "fca/detail/xpoly.hpp"

namespace fca {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

uint64_t ipow(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e--) {
        if (r > (uint64_t(1) << 40)) throw std::overflow_error("ipow: exponent blow-up");
        r *= b;
    }
    return r;
}

}  // namespace

FrobeniusPeriod frobenius_period(const ResidueRing& ring) {
    // Exhaustive over all p^l elements; (M, N) lexicographically minimal.
    // lambda^{p^e} is computed by e-fold application of x -> x^p so the
    // integer exponent p^e never has to be materialized.
    std::vector<uint64_t> base(ring.modulus);  // frob^M(x)
    for (uint64_t x = 0; x < ring.modulus; ++x) base[x] = x;
    for (uint32_t M = 0; M <= 2 * ring.l + 2; ++M) {
        std::vector<uint64_t> t = base;
        for (uint32_t N = 1; N <= ring.l + static_cast<uint32_t>(ring.modulus); ++N) {
            for (auto& x : t) x = ring.pow(x, ring.p);
            if (t == base) return {M, N, ipow(ring.p, N)};
        }
        for (auto& x : base) x = ring.pow(x, ring.p);
    }
    throw std::logic_error("frobenius_period: no preperiod found");
}

Relation derive_relation(const MonicPoly& pi, const ResidueRing& ring) {
    const FrobeniusPeriod fp = frobenius_period(ring);
    const uint64_t p = ring.p;
    const uint32_t l = ring.l, M = fp.preperiod;
    const int64_t m = pi.degree;
    const uint64_t pM = ipow(p, M);
    const uint64_t pl1 = ipow(p, l - 1);
    const int64_t m_prime = static_cast<int64_t>(ipow(p, M + 2 * (l - 1))) * m;

    // P(X) = ( sum_j ( sum_i lambda_{i,j}^{p^M} U^{p^M i} )^{p^{l-1}}
    //                X^{p^{M+l-1} j} )^{p^{l-1}},
    // expanded exactly in R[U,U^-1][X]; mu_{i,j} = coeff of U^i X^j.
    detail::XPoly q(ring);
    q.c.assign(static_cast<size_t>(ipow(p, M + l - 1)) * static_cast<size_t>(m - 1) + 1,
               LaurentPoly(ring));
    for (int64_t j = 0; j < m; ++j) {
        LaurentPoly inner(ring);
        for (auto& [i, c] : pi.lambda[static_cast<size_t>(j)].coeffs())
            inner.set(static_cast<int64_t>(pM) * i, ring.pow(c, pM));
        q.c[static_cast<size_t>(ipow(p, M + l - 1)) * static_cast<size_t>(j)] = inner.pow(pl1);
    }
    q.trim();
    detail::XPoly pexp = q.pow(pl1);

    if (pexp.degree() >= m_prime)
        throw std::logic_error("derive_relation: expansion degree exceeds m'");

    Relation rel{ring, fp.k, m_prime, m, {}};
    for (size_t j = 0; j < pexp.c.size(); ++j)
        for (auto& [i, c] : pexp.c[j].coeffs())
            rel.mu[{i, static_cast<int64_t>(j)}] = c;
    return rel;
}

LeafTables leaf_tables(const Relation& rel) {
    const ResidueRing& ring = rel.ring;
    const int64_t mp = rel.m_prime;
    const int64_t k = static_cast<int64_t>(rel.k);
    if (mp * k > (1 << 20)) throw std::overflow_error("leaf_tables: k*m' too large");

    // mu as coefficient polynomials: X^{m'} = sum_j mu_j(u) X^j, where the
    // u-exponent i stands for the spatial offset delta = -i.
    std::vector<LaurentPoly> mu_poly(static_cast<size_t>(mp), LaurentPoly(ring));
    for (auto& [key, c] : rel.mu) mu_poly[static_cast<size_t>(key.second)].set(key.first, c);

    // red[E][j] = coefficient polynomial of Xi^j in the full decomposition of
    // Xi^E; built incrementally (each step is one largest-exponent rewrite).
    std::vector<std::vector<LaurentPoly>> red(static_cast<size_t>(mp * k));
    for (int64_t e = 0; e < mp * k; ++e) {
        auto& row = red[static_cast<size_t>(e)];
        row.assign(static_cast<size_t>(mp), LaurentPoly(ring));
        if (e < mp) {
            row[static_cast<size_t>(e)] = LaurentPoly::constant(ring, 1);
            continue;
        }
        const auto& prev = red[static_cast<size_t>(e - 1)];
        // Multiply by X, then substitute the single overflow term.
        const LaurentPoly& overflow = prev[static_cast<size_t>(mp - 1)];
        for (int64_t j = mp - 1; j >= 1; --j) row[static_cast<size_t>(j)] = prev[static_cast<size_t>(j - 1)];
        if (!overflow.is_zero())
            for (int64_t j = 0; j < mp; ++j)
                row[static_cast<size_t>(j)] = row[static_cast<size_t>(j)] + overflow * mu_poly[static_cast<size_t>(j)];
    }

    LeafTables out;
    out.k = rel.k;
    out.m_prime = mp;
    out.tables.resize(static_cast<size_t>(mp * k));
    for (int64_t j = 0; j < mp; ++j)
        for (int64_t t = 0; t < k; ++t) {
            auto& terms = out.tables[static_cast<size_t>(j * k + t)];
            const auto& row = red[static_cast<size_t>(k * j + t)];
            for (int64_t jp = 0; jp < mp; ++jp)
                for (auto& [i, c] : row[static_cast<size_t>(jp)].coeffs())
                    terms.push_back({-i, jp, c});
            std::sort(terms.begin(), terms.end(), [](const LeafTerm& a, const LeafTerm& b) {
                return std::tie(a.jprime, a.delta) < std::tie(b.jprime, b.delta);
            });
        }
    return out;
}

bool window_is_closed(const LeafTables& tables, uint64_t k, int64_t lo, int64_t hi) {
    const int64_t ik = static_cast<int64_t>(k);
    for (auto& table : tables.tables)
        for (auto& term : table)
            for (int64_t s = 0; s < ik; ++s)
                for (int64_t o = lo; o <= hi; ++o) {
                    int64_t v = s + o + term.delta;
                    if (((v % ik) + ik) % ik != 0) continue;
                    int64_t in = v / ik;
                    if (in < lo || in > hi) return false;
                }
    return true;
}

Window compute_window(const LeafTables& tables, uint64_t k, bool refined) {
    Window w;
    bool first = true;
    for (auto& table : tables.tables)
        for (auto& term : table) {
            if (first) {
                w.raw_min = w.raw_max = term.delta;
                first = false;
            } else {
                w.raw_min = std::min(w.raw_min, term.delta);
                w.raw_max = std::max(w.raw_max, term.delta);
            }
        }
    if (first) throw std::invalid_argument("compute_window: empty tables");

    const int64_t ik = static_cast<int64_t>(k);
    // Safe linear bound: (s + o + delta) / k stays inside for any s in [0,k).
    int64_t safe_lo = floor_div(w.raw_min, ik - 1);
    int64_t safe_hi = ceil_div(w.raw_max + ik - 1, ik - 1);

    if (!refined) {
        w.lo = safe_lo;
        w.hi = safe_hi;
        if (!window_is_closed(tables, k, w.lo, w.hi))
            throw std::logic_error("compute_window: safe window not closed");
        return w;
    }

    // Smallest closed window within the safe bound; ties broken toward the
    // most centred placement.
    for (int64_t width = 1; width <= safe_hi - safe_lo + 1; ++width) {
        int64_t best_lo = 0;
        bool found = false;
        for (int64_t lo = safe_lo; lo + width - 1 <= safe_hi; ++lo) {
            if (!window_is_closed(tables, k, lo, lo + width - 1)) continue;
            if (!found || std::abs(2 * lo + width - 1) < std::abs(2 * best_lo + width - 1) ||
                (std::abs(2 * lo + width - 1) == std::abs(2 * best_lo + width - 1) && lo > best_lo)) {
                best_lo = lo;
                found = true;
            }
        }
        if (found) {
            w.lo = best_lo;
            w.hi = best_lo + width - 1;
            return w;
        }
    }
    w.lo = safe_lo;
    w.hi = safe_hi;
    return w;
}

}  // namespace fca
