#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace fca;

namespace {

Configuration random_config(std::mt19937_64& rng, const ResidueRing& r, int d) {
    Configuration c(r, d);
    std::uniform_int_distribution<int64_t> pos(-10, 10);
    for (int n = 0; n < 6; ++n) {
        CellValue v(static_cast<size_t>(d));
        for (auto& x : v) x = rng() % r.modulus;
        c.add(pos(rng), v);
    }
    return c;
}

// Row y of the diagram must equal the columns of T^y applied to xi.
bool row_matches_power(const PolyMatrix& t, const CellValue& xi, const Configuration& row,
                       uint64_t y) {
    PolyMatrix ty = mat_pow(t, y);
    const ResidueRing& r = t.ring();
    Configuration want(r, t.dim());
    int64_t lo = 0, hi = 0;
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            if (ty.at(i, j).is_zero()) continue;
            lo = std::min(lo, ty.at(i, j).min_exp());
            hi = std::max(hi, ty.at(i, j).max_exp());
        }
    for (int64_t x = lo; x <= hi; ++x) {
        CellValue v(static_cast<size_t>(t.dim()), 0);
        for (int i = 0; i < t.dim(); ++i)
            for (int j = 0; j < t.dim(); ++j)
                v[static_cast<size_t>(i)] =
                    r.add(v[static_cast<size_t>(i)],
                          r.mul(ty.at(i, j).coeff(x), xi[static_cast<size_t>(j)]));
        want.add(x, v);
    }
    return want == row;
}

}  // namespace

TEST_CASE("step examples") {
    PolyMatrix t = fix::theta();
    Configuration c = Configuration::delta(t.ring(), {1, 0});
    Configuration s = step(c, t);
    REQUIRE(s.cells().size() == 1);
    CHECK(s.get(0) == CellValue{0, 1});

    Configuration empty(t.ring(), 2);
    CHECK(step(empty, t).empty());

    // shift matrix u*I on delta_0 -> delta at +1 (offset = exponent)
    PolyMatrix sh = fix::shift();
    Configuration d0 = Configuration::delta(sh.ring(), {1});
    Configuration d1 = step(d0, sh);
    REQUIRE(d1.cells().size() == 1);
    CHECK(d1.get(1) == CellValue{1});
}

TEST_CASE("translation covariance and linearity") {
    std::mt19937_64 rng(42);
    for (const auto& t : {fix::theta(), fix::theta_k4()}) {
        for (int iter = 0; iter < 50; ++iter) {
            Configuration c = random_config(rng, t.ring(), t.dim());
            CHECK(step(c.shifted(3), t) == step(c, t).shifted(3));
            Configuration c2 = random_config(rng, t.ring(), t.dim());
            CHECK(step(c + c2, t) == step(c, t) + step(c2, t));
        }
    }
}

TEST_CASE("spacetime rows equal matrix powers") {
    for (const auto& t : {fix::theta(), fix::theta_u(), fix::theta_k4(), fix::rule90()}) {
        CellValue xi = fix::e1(static_cast<size_t>(t.dim()));
        Diagram d = spacetime(t, xi, 32);
        REQUIRE(d.rows.size() == 33);
        for (uint64_t y = 0; y <= 32; ++y)
            CHECK(row_matches_power(t, xi, d.rows[y], y));
    }
}

TEST_CASE("spacetime trivia") {
    PolyMatrix t = fix::theta();
    Diagram d0 = spacetime(t, {1, 0}, 0);
    CHECK(d0.rows.size() == 1);
    CHECK(d0.rows[0].cells().size() == 1);

    Diagram d2 = spacetime(t, {1, 0}, 2);
    auto [lo, hi] = d2.window();
    CHECK(lo == -1);
    CHECK(hi == 1);
    CHECK(row_matches_power(t, {1, 0}, d2.rows[2], 2));
}

TEST_CASE("projection: Theta over Z4 reduces to Theta over Z2") {
    PolyMatrix t4 = fix::theta_k4();
    PolyMatrix t2 = fix::theta();
    Diagram d4 = spacetime(t4, {1, 0}, 255);
    Diagram d2 = spacetime(t2, {1, 0}, 255);
    ResidueRing z2(2, 1);
    for (size_t y = 0; y < d4.rows.size(); ++y)
        CHECK(d4.rows[y].reduced_to(z2) == d2.rows[y]);
}

TEST_CASE("dual identity") {
    auto rep = check_dual_identity(fix::theta(), 6);
    CHECK(rep.supported);
    CHECK(rep.holds);
    CHECK(rep.trace_match);

    auto rep_u = check_dual_identity(fix::theta_u(), 6);
    CHECK(rep_u.supported);
    CHECK(rep_u.holds);

    auto rep_id = check_dual_identity(PolyMatrix::identity(ResidueRing(2, 1), 2), 3);
    CHECK(rep_id.supported);
    CHECK(rep_id.holds);

    // Z_4 fails the characteristic-2 precondition
    CHECK_FALSE(check_dual_identity(fix::theta_k4(), 3).supported);
}

TEST_CASE("weak p-Fermat diagnostic") {
    auto v = is_weakly_p_fermat(fix::theta(), {1, 0}, 2, 8);
    CHECK(v.violation_found);

    auto id = is_weakly_p_fermat(PolyMatrix::identity(ResidueRing(2, 1), 2), {1, 0}, 2, 8);
    CHECK_FALSE(id.violation_found);

    auto r90 = is_weakly_p_fermat(fix::rule90(), {1}, 2, 16);
    CHECK_FALSE(r90.violation_found);
}
