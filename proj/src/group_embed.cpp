#include "fca/group_embed.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fca {

namespace {

// p-adic valuation and cofactor: n = p^a * q with p not dividing q.
std::pair<uint32_t, uint64_t> split_prime(uint64_t n, uint64_t p) {
    uint32_t a = 0;
    while (n % p == 0) {
        n /= p;
        ++a;
    }
    return {a, n};
}

uint64_t mod_inverse(uint64_t a, uint64_t m) {
    int64_t t = 0, nt = 1, r = static_cast<int64_t>(m), nr = static_cast<int64_t>(a % m);
    while (nr != 0) {
        int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> ps;
    for (uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            ps.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) ps.push_back(n);
    return ps;
}

}  // namespace

GroupSpec GroupSpec::from_orders(const std::vector<uint64_t>& orders) {
    if (orders.empty()) throw std::invalid_argument("GroupSpec: no factors");
    for (uint64_t n : orders)
        if (n < 2) throw std::invalid_argument("GroupSpec: factor order must be >= 2");
    return GroupSpec{orders};
}

uint64_t GroupSpec::order() const {
    uint64_t n = 1;
    for (uint64_t o : orders) n *= o;
    return n;
}

uint64_t GroupSpec::p_group_prime() const {
    uint64_t p = 0;
    for (uint64_t n : orders) {
        auto ps = prime_factors(n);
        if (ps.size() != 1) return 0;
        if (p == 0) p = ps[0];
        if (ps[0] != p) return 0;
    }
    return p;
}

std::vector<uint64_t> apply_endo(const GroupSpec& g, const EndoSpec& alpha,
                                 const std::vector<uint64_t>& elem) {
    size_t n = g.orders.size();
    if (alpha.images.size() != n || elem.size() != n)
        throw std::invalid_argument("apply_endo: size mismatch");
    std::vector<uint64_t> out(n, 0);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i)
            out[i] = (out[i] + elem[j] % g.orders[j] * (alpha.images[j][i] % g.orders[i])) % g.orders[i];
    return out;
}

std::vector<PrimeComponent> crt_split(const GroupSpec& g, const EndoSpec& alpha) {
    if (alpha.images.size() != g.orders.size())
        throw std::invalid_argument("crt_split: endomorphism size mismatch");
    std::set<uint64_t> primes;
    for (uint64_t n : g.orders)
        for (uint64_t p : prime_factors(n)) primes.insert(p);

    std::vector<PrimeComponent> out;
    for (uint64_t p : primes) {
        // Original factor indices with a nontrivial p-part.
        std::vector<size_t> idx;
        std::vector<uint64_t> porders;  // p^{a_i}
        std::vector<uint64_t> cof;      // q_i = n_i / p^{a_i}
        for (size_t i = 0; i < g.orders.size(); ++i) {
            auto [a, q] = split_prime(g.orders[i], p);
            if (a > 0) {
                idx.push_back(i);
                uint64_t pa = 1;
                for (uint32_t t = 0; t < a; ++t) pa *= p;
                porders.push_back(pa);
                cof.push_back(q);
            }
        }
        if (idx.empty()) continue;

        // Generator of the p-part of factor i is h_i = q_i * e_i; express
        // alpha(h_j) in the basis of the h_i.
        PrimeComponent comp;
        comp.p = p;
        comp.group = GroupSpec{porders};
        comp.endo.images.resize(idx.size());
        for (size_t jj = 0; jj < idx.size(); ++jj) {
            size_t j = idx[jj];
            comp.endo.images[jj].resize(idx.size());
            for (size_t ii = 0; ii < idx.size(); ++ii) {
                size_t i = idx[ii];
                uint64_t v = cof[jj] % g.orders[i] * (alpha.images[j][i] % g.orders[i]) % g.orders[i];
                // v lies in the p-part q_i * Z_{p^{a_i}}; divide out q_i.
                uint64_t c = v % porders[ii] * mod_inverse(cof[ii] % porders[ii], porders[ii]) % porders[ii];
                comp.endo.images[jj][ii] = c;
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

EmbeddedEndo embed(const GroupSpec& g, const EndoSpec& alpha) {
    uint64_t p = g.p_group_prime();
    if (p == 0) throw std::invalid_argument("embed: group is not a p-group");
    if (alpha.images.size() != g.orders.size())
        throw std::invalid_argument("embed: endomorphism size mismatch");
    size_t d = g.orders.size();

    std::vector<uint32_t> exps(d);
    for (size_t i = 0; i < d; ++i) exps[i] = split_prime(g.orders[i], p).first;

    // Sort factors so exponents are non-increasing; k is the largest exponent.
    std::vector<size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](size_t a, size_t b) { return exps[a] > exps[b]; });
    std::vector<uint32_t> sorted(d);
    for (size_t i = 0; i < d; ++i) sorted[i] = exps[perm[i]];
    uint32_t k = sorted[0];

    EmbeddedEndo out{ResidueRing(p, k), PolyMatrix(ResidueRing(p, k), static_cast<int>(d)), sorted, perm};
    for (size_t j = 0; j < d; ++j)
        for (size_t i = 0; i < d; ++i) {
            uint64_t v = alpha.images[perm[j]][perm[i]] % g.orders[perm[i]];
            uint32_t kj = sorted[j], ki = sorted[i];
            uint64_t entry;
            if (kj >= ki) {
                uint64_t scale = 1;
                for (uint32_t t = 0; t < kj - ki; ++t) scale = scale * p % out.ring.modulus;
                entry = v % out.ring.modulus * scale % out.ring.modulus;
            } else {
                // Negative power: exact division required by the order constraint.
                uint64_t div = 1;
                for (uint32_t t = 0; t < ki - kj; ++t) div *= p;
                if (v % div != 0)
                    throw std::invalid_argument("embed: invalid endomorphism, alpha(e_" +
                                                std::to_string(j + 1) + ")_" + std::to_string(i + 1) +
                                                " not divisible by p^" + std::to_string(ki - kj));
                entry = v / div;
            }
            if (entry != 0)
                out.matrix.at(static_cast<int>(i), static_cast<int>(j)) =
                    LaurentPoly::constant(out.ring, static_cast<int64_t>(entry));
        }
    return out;
}

std::vector<uint64_t> embed_element(const EmbeddedEndo& emb, const GroupSpec& g,
                                    const std::vector<uint64_t>& elem) {
    size_t d = g.orders.size();
    std::vector<uint64_t> out(d);
    for (size_t i = 0; i < d; ++i) {
        uint64_t scale = 1;
        for (uint32_t t = 0; t < emb.exponents[0] - emb.exponents[i]; ++t)
            scale = scale * emb.ring.p % emb.ring.modulus;
        out[i] = elem[emb.permutation[i]] % g.orders[emb.permutation[i]] * scale % emb.ring.modulus;
    }
    return out;
}

FiniteField::FiniteField(uint64_t p_, uint32_t e_, std::vector<uint64_t> mod)
    : p(p_), e(e_), modulus(std::move(mod)) {
    if (!ResidueRing::is_prime(p)) throw std::invalid_argument("FiniteField: p not prime");
    if (e < 1 || e > 8) throw std::invalid_argument("FiniteField: extension degree out of range");
    if (modulus.size() != e + 1 || modulus[e] % p != 1)
        throw std::invalid_argument("FiniteField: modulus must be monic of degree e");
    for (auto& c : modulus) c %= p;

    // Irreducibility by exhaustive trial division over F_p (e <= 8, p small).
    auto poly_mod = [&](std::vector<uint64_t> a, const std::vector<uint64_t>& b) {
        while (a.size() >= b.size()) {
            uint64_t lead = a.back() % p;
            if (lead != 0) {
                uint64_t inv = 1;
                for (uint64_t t = 1; t < p; ++t)
                    if (t * (b.back() % p) % p == 1) inv = t;
                uint64_t q = lead * inv % p;
                size_t off = a.size() - b.size();
                for (size_t i = 0; i < b.size(); ++i)
                    a[off + i] = (a[off + i] + p * q - q * b[i] % p) % p;
            }
            a.pop_back();
        }
        return a;
    };
    for (uint32_t deg = 1; deg <= e / 2; ++deg) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < deg; ++i) count *= p;
        for (uint64_t code = 0; code < count; ++code) {
            std::vector<uint64_t> div(deg + 1, 0);
            uint64_t c = code;
            for (uint32_t i = 0; i < deg; ++i) {
                div[i] = c % p;
                c /= p;
            }
            div[deg] = 1;
            auto rem = poly_mod(modulus, div);
            bool zero = std::all_of(rem.begin(), rem.end(), [&](uint64_t x) { return x % p == 0; });
            if (zero) throw std::invalid_argument("FiniteField: modulus is reducible");
        }
    }
}

FieldElem FiniteField::add(const FieldElem& a, const FieldElem& b) const {
    FieldElem r(e, 0);
    for (uint32_t i = 0; i < e; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
}

FieldElem FiniteField::mul(const FieldElem& a, const FieldElem& b) const {
    std::vector<uint64_t> prod(2 * e - 1, 0);
    for (uint32_t i = 0; i < e; ++i)
        for (uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    // Reduce w^t for t >= e using w^e = -modulus[0..e-1].
    for (size_t t = prod.size(); t-- > e;) {
        uint64_t c = prod[t] % p;
        if (c == 0) continue;
        prod[t] = 0;
        for (uint32_t i = 0; i < e; ++i)
            prod[t - e + i] = (prod[t - e + i] + (p - modulus[i] % p) % p * c) % p;
    }
    prod.resize(e);
    return prod;
}

std::vector<std::vector<uint64_t>> FiniteField::mult_matrix(const FieldElem& a) const {
    std::vector<std::vector<uint64_t>> m(e, std::vector<uint64_t>(e, 0));
    FieldElem basis(e, 0);
    for (uint32_t col = 0; col < e; ++col) {
        std::fill(basis.begin(), basis.end(), 0);
        basis[col] = 1;
        FieldElem prod = mul(a, basis);
        for (uint32_t row = 0; row < e; ++row) m[row][col] = prod[row];
    }
    return m;
}

PolyMatrix flatten_field(const FieldPolyMatrix& t, const FiniteField& f) {
    ResidueRing ring(f.p, 1);
    int de = t.d * static_cast<int>(f.e);
    PolyMatrix out(ring, de);
    for (int i = 0; i < t.d; ++i)
        for (int j = 0; j < t.d; ++j)
            for (auto& [exp, elem] : t.at(i, j)) {
                auto m = f.mult_matrix(elem);
                for (uint32_t r = 0; r < f.e; ++r)
                    for (uint32_t c = 0; c < f.e; ++c)
                        if (m[r][c] % f.p != 0) {
                            auto& entry = out.at(i * static_cast<int>(f.e) + static_cast<int>(r),
                                                 j * static_cast<int>(f.e) + static_cast<int>(c));
                            entry = entry + LaurentPoly::monomial(ring, static_cast<int64_t>(m[r][c]), exp);
                        }
            }
    return out;
}

}  // namespace fca
