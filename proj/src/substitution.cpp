#include "fca/substitution.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fca {

namespace {

int hex_digits_for(uint64_t modulus) {
    int n = 1;
    uint64_t top = modulus - 1;
    while (top > 15) {
        top >>= 4;
        ++n;
    }
    return n;
}

uint64_t ipow_u(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

uint64_t gcd_u(uint64_t a, uint64_t b) { return std::gcd(a, b); }

}  // namespace

ChildMaps child_maps(const LeafTables& tables, int64_t lo, int64_t hi) {
    const int64_t k = static_cast<int64_t>(tables.k);
    const int64_t mp = tables.m_prime;
    const int64_t width = hi - lo + 1;
    ChildMaps cm;
    cm.k = tables.k;
    cm.m_prime = mp;
    cm.lo = lo;
    cm.hi = hi;
    cm.maps.resize(static_cast<size_t>(k * k));
    // Child entry (j', o) = alpha_{j'}(kx+s+o, ky+t)
    //   = sum over j < m' and (delta, j', c) in table(j, t) with k | (s+o+delta)
    //     of c * parent entry (j, (s+o+delta)/k).
    for (int64_t t = 0; t < k; ++t)
        for (int64_t s = 0; s < k; ++s) {
            auto& out = cm.maps[static_cast<size_t>(t * k + s)];
            for (int64_t j = 0; j < mp; ++j)
                for (auto& term : tables.table(j, static_cast<uint64_t>(t))) {
                    for (int64_t o = lo; o <= hi; ++o) {
                        int64_t v = s + o + term.delta;
                        if (((v % k) + k) % k != 0) continue;
                        int64_t in_o = v / k;
                        if (in_o < lo || in_o > hi)
                            throw std::invalid_argument(
                                "child_maps: window not closed, needs offset " +
                                std::to_string(in_o) + " outside [" + std::to_string(lo) + "," +
                                std::to_string(hi) + "]");
                        int64_t out_idx = term.jprime * width + (o - lo);
                        int64_t in_idx = j * width + (in_o - lo);
                        out.push_back({out_idx, in_idx, static_cast<int64_t>(term.coeff)});
                    }
                }
            std::sort(out.begin(), out.end());
        }
    return cm;
}

Block apply_child(const ChildMaps& maps, const ResidueRing& ring, const Block& block,
                  uint64_t s, uint64_t t) {
    Block out(maps.block_size(), 0);
    for (auto& [oi, ii, c] : maps.map(s, t))
        out[static_cast<size_t>(oi)] = static_cast<uint32_t>(
            ring.add(out[static_cast<size_t>(oi)],
                     ring.mul(static_cast<uint64_t>(c), block[static_cast<size_t>(ii)])));
    return out;
}

std::vector<std::pair<int64_t, Block>> seed_blocks(const Relation& rel, int64_t lo, int64_t hi) {
    const int64_t width = hi - lo + 1;
    std::vector<std::pair<int64_t, Block>> out;
    // alpha_j(z, 0) = 1 iff (j, z) == (0, 0); position x sees it at o = -x.
    for (int64_t x = -hi; x <= -lo; ++x) {
        Block b(static_cast<size_t>(rel.m_prime * width), 0);
        b[static_cast<size_t>(-x - lo)] = 1;
        out.push_back({x, std::move(b)});
    }
    return out;
}

std::string SubstSystem::encode(int state) const {
    static const char* hexc = "0123456789abcdef";
    const int nd = hex_digits_for(ring.modulus);
    std::string s;
    s.reserve(states[static_cast<size_t>(state)].size() * static_cast<size_t>(nd));
    for (uint32_t d : states[static_cast<size_t>(state)])
        for (int i = nd - 1; i >= 0; --i) s.push_back(hexc[(d >> (4 * i)) & 0xf]);
    return s;
}

SubstSystem build_substitution(const Relation& rel, const LeafTables& tables, const Window& w,
                               const BuildOptions& opt) {
    ChildMaps cm = child_maps(tables, w.lo, w.hi);
    const ResidueRing& ring = rel.ring;
    const uint64_t k = rel.k;
    const size_t bs = cm.block_size();

    std::map<Block, int> index;
    std::vector<Block> pool;
    auto intern = [&](const Block& b) {
        auto it = index.find(b);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(pool.size());
        index.emplace(b, id);
        pool.push_back(b);
        return id;
    };

    const Block blank(bs, 0);
    intern(blank);
    auto seeds = seed_blocks(rel, w.lo, w.hi);
    for (auto& [pos, b] : seeds) intern(b);

    if (opt.full_space) {
        double total = 1;
        for (size_t i = 0; i < bs; ++i) total *= static_cast<double>(ring.modulus);
        if (total > 65536.0)
            throw std::invalid_argument("build_substitution: full space exceeds 2^16 states");
        Block b(bs, 0);
        for (;;) {
            intern(b);
            size_t i = 0;
            while (i < bs && ++b[i] == ring.modulus) b[i++] = 0;
            if (i == bs) break;
        }
    }

    // Breadth-first closure; pool grows in discovery order.
    std::vector<int> trans;
    for (size_t head = 0; head < pool.size(); ++head) {
        Block cur = pool[head];  // copy: pool reallocates while we append
        for (uint64_t t = 0; t < k; ++t)
            for (uint64_t s = 0; s < k; ++s) trans.push_back(intern(apply_child(cm, ring, cur, s, t)));
    }

    // Canonical order: sort by block digits (blank is all-zero, hence first).
    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pool[static_cast<size_t>(a)] < pool[static_cast<size_t>(b)]; });
    std::vector<int> rank(pool.size());
    for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);

    SubstSystem sys;
    sys.ring = ring;
    sys.k = k;
    sys.m_prime = rel.m_prime;
    sys.lo = w.lo;
    sys.hi = w.hi;
    sys.states.resize(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) sys.states[static_cast<size_t>(rank[i])] = std::move(pool[i]);
    sys.transition.resize(trans.size());
    for (size_t st = 0; st < sys.states.size(); ++st) {
        size_t old = static_cast<size_t>(order[st]);
        for (uint64_t c = 0; c < k * k; ++c)
            sys.transition[st * k * k + c] = rank[static_cast<size_t>(trans[old * k * k + c])];
    }
    for (auto& [pos, b] : seeds) sys.seed.push_back({pos, rank[static_cast<size_t>(index.at(b))]});
    std::sort(sys.seed.begin(), sys.seed.end(),
              [](const SeedEntry& a, const SeedEntry& b) { return a.pos < b.pos; });
    return sys;
}

Window rendering_window(const PolyMatrix& t, const Relation& rel, const LeafTables& tables,
                        const Window& base) {
    Window w = base;
    PolyMatrix p = PolyMatrix::identity(t.ring(), t.dim());
    for (int64_t j = 0; j < rel.m_prime; ++j) {
        for (int i = 0; i < t.dim(); ++i)
            for (int jj = 0; jj < t.dim(); ++jj)
                for (auto& [exp, c] : p.at(i, jj).coeffs()) {
                    w.lo = std::min(w.lo, -exp);
                    w.hi = std::max(w.hi, -exp);
                }
        p = p * t;
    }
    for (int guard = 0; !window_is_closed(tables, rel.k, w.lo, w.hi); ++guard) {
        if (guard > 10000) throw std::logic_error("rendering_window: closure did not terminate");
        // Extend toward whichever side the violating input offset falls on.
        const int64_t k = static_cast<int64_t>(rel.k);
        int64_t need_lo = w.lo, need_hi = w.hi;
        for (auto& table : tables.tables)
            for (auto& term : table)
                for (int64_t s = 0; s < k; ++s)
                    for (int64_t o = w.lo; o <= w.hi; ++o) {
                        int64_t v = s + o + term.delta;
                        if (((v % k) + k) % k != 0) continue;
                        need_lo = std::min(need_lo, v / k);
                        need_hi = std::max(need_hi, v / k);
                    }
        w.lo = need_lo;
        w.hi = need_hi;
    }
    return w;
}

Grid expand(const SubstSystem& sys, uint64_t n) {
    Grid g;
    if (sys.seed.empty()) {
        g.origin = 0;
        g.cols = 1;
        g.rows = 1;
        g.cells.assign(1, sys.blank());
    } else {
        g.origin = sys.seed.front().pos;
        g.cols = static_cast<size_t>(sys.seed.back().pos - g.origin + 1);
        g.rows = 1;
        g.cells.assign(g.cols, sys.blank());
        for (auto& e : sys.seed) g.cells[static_cast<size_t>(e.pos - g.origin)] = e.state;
    }
    const uint64_t k = sys.k;
    for (uint64_t level = 0; level < n; ++level) {
        Grid next;
        next.origin = g.origin * static_cast<int64_t>(k);
        next.cols = g.cols * k;
        next.rows = g.rows * k;
        next.cells.assign(next.cols * next.rows, sys.blank());
        for (size_t y = 0; y < g.rows; ++y)
            for (size_t x = 0; x < g.cols; ++x) {
                int st = g.cells[y * g.cols + x];
                if (st == sys.blank()) continue;  // blank children stay blank
                for (uint64_t t = 0; t < k; ++t)
                    for (uint64_t s = 0; s < k; ++s)
                        next.cells[(y * k + t) * next.cols + x * k + s] = sys.child(st, s, t);
            }
        g = std::move(next);
    }
    return g;
}

std::vector<bool> blank_reachable(const SubstSystem& sys) {
    const size_t n = sys.states.size();
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    std::vector<std::vector<int>> rev(n);
    for (size_t st = 0; st < n; ++st)
        for (size_t c = 0; c < k2; ++c) rev[static_cast<size_t>(sys.transition[st * k2 + c])].push_back(static_cast<int>(st));
    std::vector<bool> seen(n, false);
    std::vector<int> stack{sys.blank()};
    seen[static_cast<size_t>(sys.blank())] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : rev[static_cast<size_t>(v)])
            if (!seen[static_cast<size_t>(u)]) {
                seen[static_cast<size_t>(u)] = true;
                stack.push_back(u);
            }
    }
    return seen;
}

namespace {

// Iterative Tarjan on an adjacency-list graph.
std::vector<std::vector<int>> tarjan_sccs(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> idx(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
    std::vector<bool> onstack(static_cast<size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (idx[static_cast<size_t>(root)] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        idx[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
        stack.push_back(root);
        onstack[static_cast<size_t>(root)] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[static_cast<size_t>(f.v)].size()) {
                int w = adj[static_cast<size_t>(f.v)][f.edge++];
                if (idx[static_cast<size_t>(w)] == -1) {
                    idx[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
                    stack.push_back(w);
                    onstack[static_cast<size_t>(w)] = true;
                    call.push_back({w, 0});
                } else if (onstack[static_cast<size_t>(w)]) {
                    low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)], idx[static_cast<size_t>(w)]);
                }
            } else {
                if (low[static_cast<size_t>(f.v)] == idx[static_cast<size_t>(f.v)]) {
                    std::vector<int> scc;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        onstack[static_cast<size_t>(w)] = false;
                        scc.push_back(w);
                    } while (w != f.v);
                    sccs.push_back(std::move(scc));
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[static_cast<size_t>(call.back().v)] =
                        std::min(low[static_cast<size_t>(call.back().v)], low[static_cast<size_t>(v)]);
            }
        }
    }
    return sccs;
}

// Period of one SCC: gcd of layer slacks over internal edges; 0 if acyclic.
uint64_t scc_period(const std::vector<int>& scc, const std::vector<std::vector<int>>& adj,
                    const std::vector<int>& comp, int id) {
    if (scc.size() == 1) {
        int v = scc[0];
        for (int w : adj[static_cast<size_t>(v)])
            if (w == v) return 1;
        return 0;
    }
    std::map<int, int64_t> level;
    std::vector<int> queue{scc[0]};
    level[scc[0]] = 0;
    uint64_t g = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int w : adj[static_cast<size_t>(v)]) {
            if (comp[static_cast<size_t>(w)] != id) continue;
            auto it = level.find(w);
            if (it == level.end()) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            } else {
                int64_t slack = level[v] + 1 - it->second;
                g = gcd_u(g, static_cast<uint64_t>(std::abs(slack)));
            }
        }
    }
    return g;
}

struct PeriodReport {
    std::vector<std::vector<int>> sccs;
    std::vector<int> comp;
    std::vector<uint64_t> periods;
};

PeriodReport analyze_periods(const std::vector<std::vector<int>>& adj) {
    PeriodReport r;
    r.sccs = tarjan_sccs(adj);
    r.comp.assign(adj.size(), -1);
    for (size_t i = 0; i < r.sccs.size(); ++i)
        for (int v : r.sccs[i]) r.comp[static_cast<size_t>(v)] = static_cast<int>(i);
    for (size_t i = 0; i < r.sccs.size(); ++i)
        r.periods.push_back(scc_period(r.sccs[i], adj, r.comp, static_cast<int>(i)));
    return r;
}

// Boolean graph power: edge u -> v iff v reachable from u in exactly e steps.
std::vector<std::vector<int>> bool_power(const std::vector<std::vector<int>>& adj, uint64_t e) {
    const size_t n = adj.size();
    const size_t words = (n + 63) / 64;
    auto to_bits = [&](const std::vector<std::vector<int>>& a) {
        std::vector<uint64_t> m(n * words, 0);
        for (size_t u = 0; u < n; ++u)
            for (int v : a[u]) m[u * words + static_cast<size_t>(v) / 64] |= uint64_t(1) << (static_cast<size_t>(v) % 64);
        return m;
    };
    auto mul = [&](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
        std::vector<uint64_t> r(n * words, 0);
        for (size_t u = 0; u < n; ++u)
            for (size_t w = 0; w < words; ++w) {
                uint64_t bits = a[u * words + w];
                while (bits) {
                    size_t v = w * 64 + static_cast<size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    for (size_t x = 0; x < words; ++x) r[u * words + x] |= b[v * words + x];
                }
            }
        return r;
    };
    std::vector<uint64_t> base = to_bits(adj);
    std::vector<uint64_t> acc;
    bool have = false;
    while (e) {
        if (e & 1) {
            acc = have ? mul(acc, base) : base;
            have = true;
        }
        base = mul(base, base);
        e >>= 1;
    }
    std::vector<std::vector<int>> out(n);
    for (size_t u = 0; u < n; ++u)
        for (size_t w = 0; w < words; ++w) {
            uint64_t bits = acc[u * words + w];
            while (bits) {
                out[u].push_back(static_cast<int>(w * 64 + static_cast<size_t>(std::countr_zero(bits))));
                bits &= bits - 1;
            }
        }
    return out;
}

}  // namespace

SubstGraph graph_analysis(const SubstSystem& sys, bool checkerboard_filter) {
    const size_t n = sys.states.size();
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    std::vector<bool> keep(n, true);
    keep[static_cast<size_t>(sys.blank())] = false;
    if (checkerboard_filter) {
        std::vector<bool> ok = blank_reachable(sys);
        for (size_t i = 0; i < n; ++i)
            if (!ok[i]) keep[i] = false;
    }
    // Compact node ids over the kept states.
    std::vector<int> node(n, -1);
    std::vector<int> back;
    for (size_t i = 0; i < n; ++i)
        if (keep[i]) {
            node[i] = static_cast<int>(back.size());
            back.push_back(static_cast<int>(i));
        }
    std::vector<std::vector<int>> adj(back.size());
    for (size_t st = 0; st < n; ++st) {
        if (!keep[st]) continue;
        std::vector<int> outs;
        for (size_t c = 0; c < k2; ++c) {
            int ch = sys.transition[st * k2 + c];
            if (keep[static_cast<size_t>(ch)]) outs.push_back(node[static_cast<size_t>(ch)]);
        }
        std::sort(outs.begin(), outs.end());
        outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
        adj[static_cast<size_t>(node[st])] = std::move(outs);
    }

    PeriodReport rep = analyze_periods(adj);
    SubstGraph g;
    g.kappa = 1;
    // Prop.-3 fixed point: as long as some SCC has period > 1, pass to the
    // lcm-power of the graph and multiply kappa accordingly.
    PeriodReport cur = rep;
    std::vector<std::vector<int>> curadj = adj;
    for (int guard = 0; guard < 16; ++guard) {
        uint64_t l = 1;
        for (uint64_t p : cur.periods)
            if (p > 1) l = std::lcm(l, p);
        if (l == 1) break;
        g.kappa *= l;
        curadj = bool_power(curadj, l);
        cur = analyze_periods(curadj);
    }

    g.comp.assign(n, -1);
    for (size_t i = 0; i < rep.sccs.size(); ++i) {
        std::vector<int> orig;
        for (int v : rep.sccs[i]) orig.push_back(back[static_cast<size_t>(v)]);
        std::sort(orig.begin(), orig.end());
        for (int v : orig) g.comp[static_cast<size_t>(v)] = static_cast<int>(i);
        g.sccs.push_back(std::move(orig));
    }
    g.periods = rep.periods;
    return g;
}

std::string serialize(const SubstSystem& sys) {
    std::ostringstream os;
    os << "SUBST k=" << sys.k << " m'=" << sys.m_prime << " window=[" << sys.lo << "," << sys.hi
       << "] ring=Z" << sys.ring.p << "^" << sys.ring.l << "\n";
    os << "SEED";
    for (auto& e : sys.seed) os << " " << e.pos << ":" << sys.encode(e.state);
    os << "\n";
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    for (size_t st = 0; st < sys.states.size(); ++st) {
        os << "S " << sys.encode(static_cast<int>(st)) << " ->";
        for (size_t c = 0; c < k2; ++c) os << " " << sys.encode(sys.transition[st * k2 + c]);
        os << "\n";
    }
    return os.str();
}

SubstSystem deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("deserialize: empty input");
    SubstSystem sys;
    {
        uint64_t k = 0, p = 0;
        int64_t mp = 0, lo = 0, hi = 0;
        uint32_t l = 0;
        if (std::sscanf(line.c_str(), "SUBST k=%llu m'=%lld window=[%lld,%lld] ring=Z%llu^%u",
                        reinterpret_cast<unsigned long long*>(&k),
                        reinterpret_cast<long long*>(&mp), reinterpret_cast<long long*>(&lo),
                        reinterpret_cast<long long*>(&hi),
                        reinterpret_cast<unsigned long long*>(&p), &l) != 6)
            throw std::invalid_argument("deserialize: bad header: " + line);
        sys.ring = ResidueRing(p, l);
        sys.k = k;
        sys.m_prime = mp;
        sys.lo = lo;
        sys.hi = hi;
    }
    const int nd = hex_digits_for(sys.ring.modulus);
    const size_t bs = static_cast<size_t>(sys.m_prime * sys.width());
    auto decode = [&](const std::string& hex) {
        if (hex.size() != bs * static_cast<size_t>(nd))
            throw std::invalid_argument("deserialize: bad state encoding: " + hex);
        Block b(bs, 0);
        for (size_t i = 0; i < bs; ++i) {
            uint32_t v = 0;
            for (int j = 0; j < nd; ++j) {
                char c = hex[i * static_cast<size_t>(nd) + static_cast<size_t>(j)];
                uint32_t nib = c >= 'a' ? static_cast<uint32_t>(c - 'a' + 10) : static_cast<uint32_t>(c - '0');
                v = (v << 4) | nib;
            }
            if (v >= sys.ring.modulus) throw std::invalid_argument("deserialize: digit out of range");
            b[i] = v;
        }
        return b;
    };

    std::string seedline;
    if (!std::getline(is, seedline) || seedline.rfind("SEED", 0) != 0)
        throw std::invalid_argument("deserialize: missing SEED line");

    std::vector<std::string> hexes;
    std::vector<std::vector<std::string>> childhex;
    std::map<std::string, int> lookup;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag, hex, arrow;
        if (!(ls >> tag >> hex >> arrow) || tag != "S" || arrow != "->")
            throw std::invalid_argument("deserialize: bad transition line: " + line);
        lookup[hex] = static_cast<int>(hexes.size());
        hexes.push_back(hex);
        std::vector<std::string> kids;
        std::string h;
        while (ls >> h) kids.push_back(h);
        if (kids.size() != static_cast<size_t>(sys.k * sys.k))
            throw std::invalid_argument("deserialize: wrong child count: " + line);
        childhex.push_back(std::move(kids));
    }
    for (size_t i = 0; i < hexes.size(); ++i) sys.states.push_back(decode(hexes[i]));
    for (auto& kids : childhex)
        for (auto& h : kids) {
            auto it = lookup.find(h);
            if (it == lookup.end()) throw std::invalid_argument("deserialize: unknown child state " + h);
            sys.transition.push_back(it->second);
        }

    std::istringstream ss(seedline.substr(4));
    std::string tok;
    while (ss >> tok) {
        size_t colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("deserialize: bad seed entry " + tok);
        int64_t pos = std::stoll(tok.substr(0, colon));
        auto it = lookup.find(tok.substr(colon + 1));
        if (it == lookup.end()) throw std::invalid_argument("deserialize: unknown seed state in " + tok);
        sys.seed.push_back({pos, it->second});
    }
    return sys;
}

}  // namespace fca
