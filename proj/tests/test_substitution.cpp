#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace fca;

namespace {

// Theta blocks with the refined window [-1,2]: digit layout is j-major,
// offset ascending, so indices 0..3 = (j=0, o=-1..2) = e f g h and
// 4..7 = (j=1, o=-1..2) = a b c d in the paper's lettering.
enum { E = 0, F = 1, G = 2, H = 3, A = 4, B = 5, C = 6, D = 7 };

Block basis(int idx) {
    Block b(8, 0);
    b[static_cast<size_t>(idx)] = 1;
    return b;
}

// The displayed substitution table as linear forms over the parent digits
// [e f g h a b c d]. child_digit[(t*2+s)][out][in] = 1 iff `in` contributes.
// Display layout: left column s=0, right s=1; bottom row t=0, top row t=1
// (the F -> (B A / F E) rule fixes the orientation: row 0 of the expansion
// stays the seed word).
struct LinForm {
    std::vector<int> terms;  // parent digit indices, summed mod 2
};
using ChildSpec = std::array<LinForm, 8>;  // output digits e f g h a b c d

ChildSpec child_spec(uint64_t s, uint64_t t) {
    auto f = [](std::initializer_list<int> l) { return LinForm{std::vector<int>(l)}; };
    if (s == 0 && t == 0)  // (a+b b b+c c / 0 b+f 0 c+g)
        return {f({}),     f({B, F}),    f({}),     f({C, G}),
                f({A, B}), f({B}),       f({B, C}), f({C})};
    if (s == 1 && t == 0)  // (b b+c c c+d / b+f 0 c+g 0)
        return {f({B, F}), f({}),        f({C, G}), f({}),
                f({B}),    f({B, C}),    f({C}),    f({C, D})};
    if (s == 0 && t == 1)  // (0 a+c+f 0 b+d+g / a+b b b+c c)
        return {f({A, B}), f({B}),       f({B, C}), f({C}),
                f({}),     f({A, C, F}), f({}),     f({B, D, G})};
    // s == 1, t == 1:        (a+c+f 0 b+d+g 0 / b b+c c c+d)
    return {f({B}),        f({B, C}),    f({C}),    f({C, D}),
            f({A, C, F}),  f({}),        f({B, D, G}), f({})};
}

Block apply_spec(const ChildSpec& cs, const Block& parent) {
    Block out(8, 0);
    for (int o = 0; o < 8; ++o) {
        uint32_t v = 0;
        for (int in : cs[static_cast<size_t>(o)].terms) v ^= parent[static_cast<size_t>(in)];
        out[static_cast<size_t>(o)] = v;
    }
    return out;
}

fix::Pipeline theta_full() {
    BuildOptions opt;
    opt.full_space = true;
    return fix::derive_all(fix::theta(), true, opt);
}

int state_index(const SubstSystem& sys, const Block& b) {
    for (size_t i = 0; i < sys.states.size(); ++i)
        if (sys.states[i] == b) return static_cast<int>(i);
    return -1;
}

}  // namespace

TEST_CASE("Theta full-space system basics") {
    auto p = theta_full();
    CHECK(p.sys.k == 2);
    CHECK(p.sys.m_prime == 2);
    CHECK(p.sys.lo == -1);
    CHECK(p.sys.hi == 2);
    CHECK(p.sys.states.size() == 256);
    // blank maps to four blanks
    for (uint64_t s = 0; s < 2; ++s)
        for (uint64_t t = 0; t < 2; ++t) CHECK(p.sys.child(p.sys.blank(), s, t) == p.sys.blank());
}

TEST_CASE("Theta reachable alphabet") {
    auto p = fix::derive_all(fix::theta());
    CHECK(p.sys.states.size() == 99);
}

TEST_CASE("displayed substitution table, all 256 states entry-for-entry") {
    auto p = theta_full();
    for (size_t st = 0; st < p.sys.states.size(); ++st)
        for (uint64_t s = 0; s < 2; ++s)
            for (uint64_t t = 0; t < 2; ++t) {
                Block want = apply_spec(child_spec(s, t), p.sys.states[st]);
                int ch = p.sys.child(static_cast<int>(st), s, t);
                CHECK(p.sys.states[static_cast<size_t>(ch)] == want);
            }
}

TEST_CASE("the F rule and the seed word") {
    auto p = theta_full();
    int f = state_index(p.sys, basis(F));
    REQUIRE(f >= 0);
    CHECK(p.sys.states[static_cast<size_t>(p.sys.child(f, 0, 0))] == basis(F));
    CHECK(p.sys.states[static_cast<size_t>(p.sys.child(f, 1, 0))] == basis(E));
    CHECK(p.sys.states[static_cast<size_t>(p.sys.child(f, 0, 1))] == basis(B));
    CHECK(p.sys.states[static_cast<size_t>(p.sys.child(f, 1, 1))] == basis(A));

    // seed: ... 0 H G F E 0 ... at positions -2..1
    REQUIRE(p.sys.seed.size() == 4);
    int want[4] = {H, G, F, E};
    for (int i = 0; i < 4; ++i) {
        CHECK(p.sys.seed[static_cast<size_t>(i)].pos == i - 2);
        CHECK(p.sys.states[static_cast<size_t>(p.sys.seed[static_cast<size_t>(i)].state)] ==
              basis(want[i]));
    }
}

TEST_CASE("transition is linear in the block digits") {
    auto p = theta_full();
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        Block b1(8), b2(8), sum(8);
        for (int i = 0; i < 8; ++i) {
            b1[static_cast<size_t>(i)] = static_cast<uint32_t>(rng() % 2);
            b2[static_cast<size_t>(i)] = static_cast<uint32_t>(rng() % 2);
            sum[static_cast<size_t>(i)] = b1[static_cast<size_t>(i)] ^ b2[static_cast<size_t>(i)];
        }
        int i1 = state_index(p.sys, b1), i2 = state_index(p.sys, b2),
            is = state_index(p.sys, sum);
        for (uint64_t s = 0; s < 2; ++s)
            for (uint64_t t = 0; t < 2; ++t) {
                const Block& c1 = p.sys.states[static_cast<size_t>(p.sys.child(i1, s, t))];
                const Block& c2 = p.sys.states[static_cast<size_t>(p.sys.child(i2, s, t))];
                const Block& cs = p.sys.states[static_cast<size_t>(p.sys.child(is, s, t))];
                for (int i = 0; i < 8; ++i)
                    CHECK(cs[static_cast<size_t>(i)] ==
                          (c1[static_cast<size_t>(i)] ^ c2[static_cast<size_t>(i)]));
            }
    }
}

TEST_CASE("closure: every child is in the alphabet") {
    for (const auto& t : {fix::theta(), fix::theta_u(), fix::rule90(), fix::shift()}) {
        auto p = fix::derive_all(t);
        for (size_t st = 0; st < p.sys.states.size(); ++st)
            for (uint64_t s = 0; s < p.sys.k; ++s)
                for (uint64_t tt = 0; tt < p.sys.k; ++tt) {
                    int ch = p.sys.child(static_cast<int>(st), s, tt);
                    CHECK(ch >= 0);
                    CHECK(ch < static_cast<int>(p.sys.states.size()));
                }
    }
}

TEST_CASE("determinism: build twice, serialize byte-identically") {
    auto p1 = fix::derive_all(fix::theta());
    auto p2 = fix::derive_all(fix::theta());
    CHECK(serialize(p1.sys) == serialize(p2.sys));
}

TEST_CASE("serialization round-trip") {
    for (const auto& t : {fix::theta(), fix::theta_u(), fix::theta_k4(), fix::rule90()}) {
        auto p = fix::derive_all(t);
        std::string text = serialize(p.sys);
        SubstSystem back = deserialize(text);
        CHECK(back.states == p.sys.states);
        CHECK(back.transition == p.sys.transition);
        CHECK(back.k == p.sys.k);
        CHECK(back.m_prime == p.sys.m_prime);
        CHECK(back.lo == p.sys.lo);
        CHECK(back.hi == p.sys.hi);
        CHECK(back.seed.size() == p.sys.seed.size());
        CHECK(serialize(back) == text);
    }
    CHECK_THROWS(deserialize("garbage"));
}

TEST_CASE("expand level 0 and 1") {
    auto p = fix::derive_all(fix::theta());
    Grid g0 = expand(p.sys, 0);
    CHECK(g0.rows == 1);
    for (auto& e : p.sys.seed) CHECK(g0.at(e.pos, 0) == e.state);

    Grid g1 = expand(p.sys, 1);
    CHECK(g1.rows == 2);
    for (auto& e : p.sys.seed)
        for (uint64_t s = 0; s < 2; ++s)
            for (uint64_t t = 0; t < 2; ++t)
                CHECK(g1.at(2 * e.pos + static_cast<int64_t>(s), t) ==
                      p.sys.child(e.state, s, t));
}

TEST_CASE("graph analysis of Theta") {
    auto p = fix::derive_all(fix::theta());
    SubstGraph g = graph_analysis(p.sys);
    CHECK(g.kappa == 1);
    CHECK(g.comp[static_cast<size_t>(p.sys.blank())] == -1);
    // every nontrivial SCC is aperiodic
    for (size_t i = 0; i < g.sccs.size(); ++i)
        if (g.sccs[i].size() > 1 || g.periods[i] != 0) CHECK(g.periods[i] == 1);
}

TEST_CASE("hand-built 2-cycle has period 2 and kappa 2") {
    // two states swapping under every (s,t)
    SubstSystem sys;
    sys.ring = ResidueRing(2, 1);
    sys.k = 2;
    sys.m_prime = 1;
    sys.lo = 0;
    sys.hi = 0;
    sys.states = {Block{0}, Block{1}, Block{2}};
    sys.transition.assign(12, 0);
    for (size_t c = 0; c < 4; ++c) {
        sys.transition[4 + c] = 2;  // state 1 -> state 2 everywhere
        sys.transition[8 + c] = 1;  // state 2 -> state 1 everywhere
    }
    sys.seed = {{0, 1}};
    SubstGraph g = graph_analysis(sys);
    REQUIRE(g.sccs.size() == 1);
    CHECK(g.sccs[0].size() == 2);
    CHECK(g.periods[0] == 2);
    CHECK(g.kappa == 2);
}

TEST_CASE("checkerboard filter drops blank-unreachable states") {
    auto p = fix::derive_all(fix::theta());
    auto reach = blank_reachable(p.sys);
    CHECK(reach[static_cast<size_t>(p.sys.blank())]);
    SubstGraph filtered = graph_analysis(p.sys, true);
    for (size_t st = 1; st < p.sys.states.size(); ++st)
        if (!reach[st]) CHECK(filtered.comp[st] == -1);
}
