#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fca/laurent.hpp"

namespace fca {

/// Square matrix over Z_{p^l}[u,u^-1]; the canonical form of a linear
/// cellular automaton. Immutable after construction in practice.
class PolyMatrix {
public:
    PolyMatrix(ResidueRing ring, int dim)
        : ring_(ring), d_(dim), e_(static_cast<size_t>(dim) * dim, LaurentPoly(ring)) {
        if (dim < 1) throw std::invalid_argument("PolyMatrix: dimension must be >= 1");
    }

    static PolyMatrix identity(ResidueRing ring, int dim) {
        PolyMatrix m(ring, dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = LaurentPoly::constant(ring, 1);
        return m;
    }

    int dim() const { return d_; }
    const ResidueRing& ring() const { return ring_; }

    LaurentPoly& at(int i, int j) { return e_[static_cast<size_t>(i) * d_ + j]; }
    const LaurentPoly& at(int i, int j) const { return e_[static_cast<size_t>(i) * d_ + j]; }

    PolyMatrix operator+(const PolyMatrix& o) const {
        check(o);
        PolyMatrix r(ring_, d_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    PolyMatrix operator-(const PolyMatrix& o) const {
        check(o);
        PolyMatrix r(ring_, d_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }

    PolyMatrix operator*(const PolyMatrix& o) const {
        check(o);
        PolyMatrix r(ring_, d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                LaurentPoly acc(ring_);
                for (int k = 0; k < d_; ++k) acc = acc + at(i, k) * o.at(k, j);
                r.at(i, j) = acc;
            }
        return r;
    }

    PolyMatrix scaled(const LaurentPoly& c) const {
        PolyMatrix r(ring_, d_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * c;
        return r;
    }

    bool is_zero() const {
        for (auto& p : e_)
            if (!p.is_zero()) return false;
        return true;
    }

    bool operator==(const PolyMatrix& o) const { return d_ == o.d_ && e_ == o.e_; }
    bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

    /// Largest |exponent| over all entries; the interaction radius of the CA.
    int64_t radius() const {
        int64_t r = 0;
        for (auto& p : e_) {
            if (p.is_zero()) continue;
            r = std::max({r, std::abs(p.min_exp()), std::abs(p.max_exp())});
        }
        return r;
    }

    PolyMatrix reduced_to(ResidueRing target) const {
        PolyMatrix r(target, d_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].reduced_to(target);
        return r;
    }

private:
    void check(const PolyMatrix& o) const {
        if (ring_ != o.ring_ || d_ != o.d_)
            throw std::invalid_argument("PolyMatrix: ring/dimension mismatch");
    }

    ResidueRing ring_;
    int d_;
    std::vector<LaurentPoly> e_;
};

/// Monic annihilating polynomial Pi(X) = X^m - sum_j lambda_j X^j with
/// Laurent-polynomial coefficients lambda_0..lambda_{m-1}.
struct MonicPoly {
    int degree = 0;
    std::vector<LaurentPoly> lambda;  // size == degree

    std::string to_string() const {
        std::string s = "X^" + std::to_string(degree);
        for (int j = degree - 1; j >= 0; --j) {
            if (lambda[static_cast<size_t>(j)].is_zero()) continue;
            s += " - (" + lambda[static_cast<size_t>(j)].to_string() + ")";
            if (j > 0) s += "*X^" + std::to_string(j);
        }
        return s;
    }
};

PolyMatrix mat_pow(const PolyMatrix& t, uint64_t n);

LaurentPoly trace(const PolyMatrix& t);

/// Division-free determinant (cofactor expansion).
LaurentPoly det(const PolyMatrix& t);

/// Adjugate-based dual of a 2x2 matrix: T * dual(T) == det(T) * I.
PolyMatrix dual(const PolyMatrix& t);

/// Characteristic polynomial det(X*I - T), returned in the monic
/// lambda-form above. Cofactor expansion for d <= 4, Berkowitz beyond.
MonicPoly char_poly(const PolyMatrix& t);

/// Horner evaluation of Pi at T; zero matrix iff Pi annihilates T.
PolyMatrix poly_eval(const MonicPoly& pi, const PolyMatrix& t);

}  // namespace fca
