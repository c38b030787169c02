#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fca/poly_matrix.hpp"

namespace fca {

/// Finite abelian group presented as a product of cyclic factors. Orders may
/// be composite for crt_split input; embed requires a p-group.
struct GroupSpec {
    std::vector<uint64_t> orders;

    static GroupSpec from_orders(const std::vector<uint64_t>& orders);

    uint64_t order() const;
    /// The single prime when all factor orders are powers of one prime; 0 otherwise.
    uint64_t p_group_prime() const;
};

/// Endomorphism given by generator images: images[j][i] is the i-th
/// coordinate of alpha(e_j).
struct EndoSpec {
    std::vector<std::vector<uint64_t>> images;
};

struct PrimeComponent {
    uint64_t p;
    GroupSpec group;
    EndoSpec endo;
};

/// Split (G, alpha) into its p-primary components, one per prime dividing |G|;
/// each component keeps the original factors (with that prime's part) in order.
std::vector<PrimeComponent> crt_split(const GroupSpec& g, const EndoSpec& alpha);

/// Apply alpha to a group element (coordinates modulo the factor orders).
std::vector<uint64_t> apply_endo(const GroupSpec& g, const EndoSpec& alpha,
                                 const std::vector<uint64_t>& elem);

struct EmbeddedEndo {
    ResidueRing ring;                 // Z_{p^k}, k the largest exponent
    PolyMatrix matrix;                // constant d x d matrix A(alpha)
    std::vector<uint32_t> exponents;  // k_1 >= k_2 >= ... after sorting
    std::vector<size_t> permutation;  // position j holds the original factor index
};

/// Embed a p-group endomorphism into M_d(Z_{p^k}); the matrix is
/// A(alpha)_{i,j} = p^{k_j - k_i} alpha(e_j)_i with exact division where the
/// exponent is negative (guaranteed by the order constraint, otherwise an error).
EmbeddedEndo embed(const GroupSpec& g, const EndoSpec& alpha);

/// The embedding s of G into Z_{p^k}^d (coordinate i scaled by p^{k - k_i}),
/// in the sorted factor order of `emb`; elem is in the original factor order.
std::vector<uint64_t> embed_element(const EmbeddedEndo& emb, const GroupSpec& g,
                                    const std::vector<uint64_t>& elem);

/// Element of F_{p^e} as a polynomial in the field generator, degree < e.
using FieldElem = std::vector<uint64_t>;

/// F_{p^e} = F_p[w]/(modulus); modulus must be monic irreducible of degree e.
struct FiniteField {
    uint64_t p;
    uint32_t e;
    std::vector<uint64_t> modulus;  // coefficients w^0..w^e, modulus[e] == 1

    FiniteField(uint64_t p_, uint32_t e_, std::vector<uint64_t> mod);

    FieldElem zero() const { return FieldElem(e, 0); }
    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    /// e x e multiplication matrix of `a` in the basis {1, w, ..., w^{e-1}}.
    std::vector<std::vector<uint64_t>> mult_matrix(const FieldElem& a) const;
};

/// Matrix over F_{p^e}[u,u^-1]: entry (i,j) maps exponent -> field element.
struct FieldPolyMatrix {
    int d = 0;
    std::vector<std::map<int64_t, FieldElem>> entries;  // d*d, row-major

    explicit FieldPolyMatrix(int dim) : d(dim), entries(static_cast<size_t>(dim) * dim) {}
    std::map<int64_t, FieldElem>& at(int i, int j) { return entries[static_cast<size_t>(i) * d + j]; }
    const std::map<int64_t, FieldElem>& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * d + j];
    }
};

/// Flatten a d x d matrix over F_{p^e}[u,u^-1] to a (d*e) x (d*e) matrix over
/// Z_p by replacing each entry with its multiplication matrix.
PolyMatrix flatten_field(const FieldPolyMatrix& t, const FiniteField& f);

}  // namespace fca
