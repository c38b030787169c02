#pragma once

// Shared fixture constructors for the test suite. Matrices are built in code
// so the tests do not depend on the parser (the parser has its own tests
// against the shipped .ca files).

#include <fstream>
#include <sstream>
#include <string>

#include "fca/ca_spec.hpp"
#include "fca/substitution.hpp"

#ifndef FIXTURE_DIR
#define FIXTURE_DIR "fixtures"
#endif

namespace fix {

inline fca::LaurentPoly trinomial(const fca::ResidueRing& r) {
    fca::LaurentPoly p(r);
    p.set(-1, 1);
    p.set(0, 1);
    p.set(1, 1);
    return p;
}

// [[0,1],[1,u^-1+1+u]] over Z_2
inline fca::PolyMatrix theta() {
    fca::ResidueRing r(2, 1);
    fca::PolyMatrix m(r, 2);
    m.at(0, 1) = fca::LaurentPoly::constant(r, 1);
    m.at(1, 0) = fca::LaurentPoly::constant(r, 1);
    m.at(1, 1) = trinomial(r);
    return m;
}

// Theta with entry (0,1) = u
inline fca::PolyMatrix theta_u() {
    fca::ResidueRing r(2, 1);
    fca::PolyMatrix m(r, 2);
    m.at(0, 1) = fca::LaurentPoly::monomial(r, 1, 1);
    m.at(1, 0) = fca::LaurentPoly::constant(r, 1);
    m.at(1, 1) = trinomial(r);
    return m;
}

// Theta lifted to Z_4
inline fca::PolyMatrix theta_k4() {
    fca::ResidueRing r(2, 2);
    fca::PolyMatrix m(r, 2);
    m.at(0, 1) = fca::LaurentPoly::constant(r, 1);
    m.at(1, 0) = fca::LaurentPoly::constant(r, 1);
    m.at(1, 1) = trinomial(r);
    return m;
}

// T over F_4, flattened to M_4(Z_2)
inline fca::PolyMatrix tf4_flat() {
    fca::FiniteField f4(2, 2, {1, 1, 1});
    fca::FieldPolyMatrix t(2);
    t.at(0, 1)[0] = {0, 1};                     // w
    t.at(1, 0)[-1] = {1, 0};                    // u^-1
    t.at(1, 1)[-1] = {1, 1};                    // (w+1) u^-1
    t.at(1, 1)[0] = {0, 1};                     // w
    t.at(1, 1)[1] = {1, 0};                     // u
    return fca::flatten_field(t, f4);
}

// Scalar rule 90: u^-1 + u over Z_2
inline fca::PolyMatrix rule90() {
    fca::ResidueRing r(2, 1);
    fca::PolyMatrix m(r, 1);
    fca::LaurentPoly p(r);
    p.set(-1, 1);
    p.set(1, 1);
    m.at(0, 0) = p;
    return m;
}

// Pure shift: scalar u over Z_2
inline fca::PolyMatrix shift() {
    fca::ResidueRing r(2, 1);
    fca::PolyMatrix m(r, 1);
    m.at(0, 0) = fca::LaurentPoly::monomial(r, 1, 1);
    return m;
}

inline fca::CellValue e1(size_t d) {
    fca::CellValue v(d, 0);
    v[0] = 1;
    return v;
}

inline std::string read_file(const std::string& name) {
    std::ifstream is(std::string(FIXTURE_DIR) + "/" + name, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// The full derivation pipeline with the refined (minimal closed) window.
struct Pipeline {
    fca::Relation rel;
    fca::LeafTables tables;
    fca::Window window;
    fca::SubstSystem sys;
};

inline Pipeline derive_all(const fca::PolyMatrix& t, bool refined = true,
                           fca::BuildOptions opt = {}) {
    Pipeline p{fca::Relation{t.ring()}, {}, {}, {}};
    fca::MonicPoly pi = fca::char_poly(t);
    p.rel = fca::derive_relation(pi, t.ring());
    p.tables = fca::leaf_tables(p.rel);
    p.window = fca::compute_window(p.tables, p.rel.k, refined);
    p.window = fca::rendering_window(t, p.rel, p.tables, p.window);
    p.sys = fca::build_substitution(p.rel, p.tables, p.window, opt);
    return p;
}

}  // namespace fix
