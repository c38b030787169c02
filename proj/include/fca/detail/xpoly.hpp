#pragma once

#include <vector>

#include "fca/laurent.hpp"

namespace fca::detail {

/// Dense polynomial in one central variable (X) with Laurent-polynomial
/// coefficients; index = power of X. Internal helper for the characteristic
/// polynomial and the relation expansion.
struct XPoly {
    ResidueRing ring;
    std::vector<LaurentPoly> c;

    explicit XPoly(ResidueRing r) : ring(r) {}

    static XPoly constant(ResidueRing r, LaurentPoly v) {
        XPoly p(r);
        p.c.push_back(std::move(v));
        p.trim();
        return p;
    }

    static XPoly one(ResidueRing r) { return constant(r, LaurentPoly::constant(r, 1)); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    LaurentPoly coeff(size_t j) const { return j < c.size() ? c[j] : LaurentPoly(ring); }

    int64_t degree() const { return static_cast<int64_t>(c.size()) - 1; }

    XPoly operator+(const XPoly& o) const {
        XPoly r(ring);
        r.c.resize(std::max(c.size(), o.c.size()), LaurentPoly(ring));
        for (size_t j = 0; j < r.c.size(); ++j) r.c[j] = coeff(j) + o.coeff(j);
        r.trim();
        return r;
    }

    XPoly operator-(const XPoly& o) const {
        XPoly r(ring);
        r.c.resize(std::max(c.size(), o.c.size()), LaurentPoly(ring));
        for (size_t j = 0; j < r.c.size(); ++j) r.c[j] = coeff(j) - o.coeff(j);
        r.trim();
        return r;
    }

    XPoly operator*(const XPoly& o) const {
        XPoly r(ring);
        if (c.empty() || o.c.empty()) return r;
        r.c.resize(c.size() + o.c.size() - 1, LaurentPoly(ring));
        for (size_t a = 0; a < c.size(); ++a) {
            if (c[a].is_zero()) continue;
            for (size_t b = 0; b < o.c.size(); ++b)
                r.c[a + b] = r.c[a + b] + c[a] * o.c[b];
        }
        r.trim();
        return r;
    }

    XPoly pow(uint64_t n) const {
        XPoly r = one(ring);
        XPoly b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }
};

}  // namespace fca::detail
