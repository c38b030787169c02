#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "fca/residue.hpp"

namespace fca {

/// Sparse Laurent polynomial over Z_{p^l}: finite map exponent -> nonzero
/// coefficient. Zero coefficients are pruned after every operation.
class LaurentPoly {
public:
    using CoeffMap = std::map<int64_t, uint64_t>;

    LaurentPoly() = default;
    explicit LaurentPoly(ResidueRing r) : ring_(r) {}

    static LaurentPoly zero(ResidueRing r) { return LaurentPoly(r); }

    static LaurentPoly constant(ResidueRing r, int64_t c) {
        LaurentPoly p(r);
        p.set(0, r.reduce(c));
        return p;
    }

    static LaurentPoly monomial(ResidueRing r, int64_t c, int64_t exp) {
        LaurentPoly p(r);
        p.set(exp, r.reduce(c));
        return p;
    }

    const ResidueRing& ring() const { return ring_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    uint64_t coeff(int64_t exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? 0 : it->second;
    }

    void set(int64_t exp, uint64_t value) {
        uint64_t v = value % ring_.modulus;
        if (v == 0)
            coeffs_.erase(exp);
        else
            coeffs_[exp] = v;
    }

    int64_t min_exp() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int64_t max_exp() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    LaurentPoly operator+(const LaurentPoly& o) const {
        check(o);
        LaurentPoly r = *this;
        for (auto& [e, c] : o.coeffs_) r.set(e, ring_.add(r.coeff(e), c));
        return r;
    }

    LaurentPoly operator-(const LaurentPoly& o) const {
        check(o);
        LaurentPoly r = *this;
        for (auto& [e, c] : o.coeffs_) r.set(e, ring_.sub(r.coeff(e), c));
        return r;
    }

    LaurentPoly operator-() const {
        LaurentPoly r(ring_);
        for (auto& [e, c] : coeffs_) r.set(e, ring_.neg(c));
        return r;
    }

    LaurentPoly operator*(const LaurentPoly& o) const {
        check(o);
        LaurentPoly r(ring_);
        for (auto& [e1, c1] : coeffs_)
            for (auto& [e2, c2] : o.coeffs_)
                r.set(e1 + e2, ring_.add(r.coeff(e1 + e2), ring_.mul(c1, c2)));
        return r;
    }

    LaurentPoly scaled(uint64_t c) const {
        LaurentPoly r(ring_);
        for (auto& [e, v] : coeffs_) r.set(e, ring_.mul(v, c));
        return r;
    }

    /// Multiply by u^n.
    LaurentPoly shifted(int64_t n) const {
        LaurentPoly r(ring_);
        for (auto& [e, c] : coeffs_) r.coeffs_[e + n] = c;
        return r;
    }

    LaurentPoly pow(uint64_t n) const {
        LaurentPoly r = constant(ring_, 1);
        LaurentPoly b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    /// Substitute u -> u^s (exponent scaling).
    LaurentPoly substitute_power(int64_t s) const {
        LaurentPoly r(ring_);
        for (auto& [e, c] : coeffs_) r.coeffs_[e * s] = c;
        return r;
    }

    /// Project coefficients into a smaller residue ring of the same prime.
    LaurentPoly reduced_to(ResidueRing target) const {
        LaurentPoly r(target);
        for (auto& [e, c] : coeffs_) r.set(e, target.reduce(static_cast<int64_t>(c)));
        return r;
    }

    bool operator==(const LaurentPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : coeffs_) {
            if (!first) os << " + ";
            first = false;
            if (c != 1 || e == 0) os << c;
            if (e != 0) {
                if (c != 1) os << "*";
                os << "u";
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void check(const LaurentPoly& o) const {
        if (ring_ != o.ring_) throw std::invalid_argument("LaurentPoly: ring mismatch");
    }

    ResidueRing ring_;
    CoeffMap coeffs_;
};

}  // namespace fca
