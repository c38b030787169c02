#include "fca/poly_matrix.hpp"

#include "fca/detail/xpoly.hpp"

namespace fca {
namespace {

using detail::XPoly;

// Determinant of a matrix of XPoly by first-column cofactor expansion.
XPoly xdet(const std::vector<XPoly>& m, int d, ResidueRing ring) {
    if (d == 1) return m[0];
    XPoly acc(ring);
    std::vector<XPoly> minor;
    minor.reserve(static_cast<size_t>(d - 1) * (d - 1));
    for (int i = 0; i < d; ++i) {
        minor.clear();
        for (int r = 0; r < d; ++r) {
            if (r == i) continue;
            for (int col = 1; col < d; ++col) minor.push_back(m[static_cast<size_t>(r) * d + col]);
        }
        XPoly term = m[static_cast<size_t>(i) * d] * xdet(minor, d - 1, ring);
        if (i % 2 == 0)
            acc = acc + term;
        else
            acc = acc - term;
    }
    return acc;
}

// Berkowitz division-free characteristic polynomial. Returns coefficients of
// det(X*I - A) from X^d down to X^0.
std::vector<LaurentPoly> berkowitz(const PolyMatrix& a) {
    const ResidueRing ring = a.ring();
    const int d = a.dim();
    const LaurentPoly one = LaurentPoly::constant(ring, 1);

    // C holds char-poly coefficients of the leading r x r principal
    // submatrix, highest power first.
    std::vector<LaurentPoly> C{one, -a.at(0, 0)};
    for (int r = 2; r <= d; ++r) {
        // Toeplitz column: 1, -a_rr, -(R S), -(R M S), -(R M^2 S), ...
        std::vector<LaurentPoly> col;
        col.push_back(one);
        col.push_back(-a.at(r - 1, r - 1));
        std::vector<LaurentPoly> v(static_cast<size_t>(r - 1), LaurentPoly(ring));
        for (int i = 0; i < r - 1; ++i) v[static_cast<size_t>(i)] = a.at(i, r - 1);
        for (int step = 0; step < r - 1; ++step) {
            LaurentPoly dot(ring);
            for (int i = 0; i < r - 1; ++i) dot = dot + a.at(r - 1, i) * v[static_cast<size_t>(i)];
            col.push_back(-dot);
            if (step + 1 < r - 1) {
                std::vector<LaurentPoly> nv(static_cast<size_t>(r - 1), LaurentPoly(ring));
                for (int i = 0; i < r - 1; ++i) {
                    LaurentPoly acc(ring);
                    for (int j = 0; j < r - 1; ++j) acc = acc + a.at(i, j) * v[static_cast<size_t>(j)];
                    nv[static_cast<size_t>(i)] = acc;
                }
                v = std::move(nv);
            }
        }
        // C_r = T * C_{r-1}, T lower-triangular Toeplitz of size (r+1) x r.
        std::vector<LaurentPoly> next(static_cast<size_t>(r + 1), LaurentPoly(ring));
        for (size_t i = 0; i < next.size(); ++i)
            for (size_t j = 0; j < C.size(); ++j)
                if (i >= j && i - j < col.size()) next[i] = next[i] + col[i - j] * C[j];
        C = std::move(next);
    }
    return C;
}

}  // namespace

PolyMatrix mat_pow(const PolyMatrix& t, uint64_t n) {
    PolyMatrix r = PolyMatrix::identity(t.ring(), t.dim());
    PolyMatrix b = t;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

LaurentPoly trace(const PolyMatrix& t) {
    LaurentPoly acc(t.ring());
    for (int i = 0; i < t.dim(); ++i) acc = acc + t.at(i, i);
    return acc;
}

LaurentPoly det(const PolyMatrix& t) {
    std::vector<XPoly> m;
    m.reserve(static_cast<size_t>(t.dim()) * t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) m.push_back(XPoly::constant(t.ring(), t.at(i, j)));
    XPoly r = xdet(m, t.dim(), t.ring());
    return r.coeff(0);
}

PolyMatrix dual(const PolyMatrix& t) {
    if (t.dim() != 2) throw std::invalid_argument("dual: only implemented for dimension 2");
    PolyMatrix r(t.ring(), 2);
    r.at(0, 0) = t.at(1, 1);
    r.at(1, 1) = t.at(0, 0);
    r.at(0, 1) = -t.at(0, 1);
    r.at(1, 0) = -t.at(1, 0);
    return r;
}

MonicPoly char_poly(const PolyMatrix& t) {
    const ResidueRing ring = t.ring();
    const int d = t.dim();
    std::vector<LaurentPoly> coeffs;  // X^d .. X^0
    if (d <= 4) {
        // det(X*I - T) by cofactor expansion over R[u,u^-1][X].
        std::vector<XPoly> m;
        m.reserve(static_cast<size_t>(d) * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                XPoly p(ring);
                p.c.push_back(-t.at(i, j));
                if (i == j) p.c.push_back(LaurentPoly::constant(ring, 1));
                p.trim();
                m.push_back(std::move(p));
            }
        XPoly r = xdet(m, d, ring);
        for (int j = d; j >= 0; --j) coeffs.push_back(r.coeff(static_cast<size_t>(j)));
    } else {
        coeffs = berkowitz(t);
    }
    MonicPoly pi;
    pi.degree = d;
    pi.lambda.assign(static_cast<size_t>(d), LaurentPoly(ring));
    // coeffs[0] is the leading 1; lambda_j = -coeff of X^j.
    for (int j = 0; j < d; ++j) pi.lambda[static_cast<size_t>(j)] = -coeffs[static_cast<size_t>(d - j)];
    return pi;
}

PolyMatrix poly_eval(const MonicPoly& pi, const PolyMatrix& t) {
    // Horner on X^m - sum lambda_j X^j.
    PolyMatrix acc = PolyMatrix::identity(t.ring(), t.dim());
    for (int j = pi.degree - 1; j >= 0; --j)
        acc = acc * t - PolyMatrix::identity(t.ring(), t.dim()).scaled(pi.lambda[static_cast<size_t>(j)]);
    return acc;
}

}  // namespace fca
