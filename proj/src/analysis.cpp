#include "fca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fca {

namespace {

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

bool is_zero_value(const CellValue& v) {
    return std::all_of(v.begin(), v.end(), [](uint64_t x) { return x == 0; });
}

// Non-blank edge list (parent, child) in compact ids (state index - 1).
std::vector<std::pair<int, int>> nonblank_edges(const SubstSystem& sys) {
    std::vector<std::pair<int, int>> edges;
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    for (size_t st = 1; st < sys.states.size(); ++st)
        for (size_t c = 0; c < k2; ++c) {
            int ch = sys.transition[st * k2 + c];
            if (ch != sys.blank()) edges.push_back({static_cast<int>(st) - 1, ch - 1});
        }
    return edges;
}

struct PowerResult {
    double lambda = 0;
    std::vector<double> vec;
    bool converged = false;
    double residual = 0;
};

// Power iteration on the kappa-th power of the non-blank transition matrix,
// applied as kappa sparse multiplications per step.
PowerResult power_iterate(const std::vector<std::pair<int, int>>& edges, size_t n, uint64_t kappa) {
    PowerResult r;
    if (n == 0) return r;
    std::vector<double> v(n, 1.0), w(n), vold(n);
    double prev = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        vold = v;
        for (uint64_t step = 0; step < kappa; ++step) {
            std::fill(w.begin(), w.end(), 0.0);
            for (auto& [parent, child] : edges) w[static_cast<size_t>(child)] += v[static_cast<size_t>(parent)];
            v = w;
        }
        double norm = 0;
        for (double x : v) norm = std::max(norm, x);
        if (norm == 0) {
            r.lambda = 0;
            r.converged = true;
            r.vec = v;
            return r;
        }
        for (double& x : v) x /= norm;
        double vdiff = 0;
        for (size_t i = 0; i < n; ++i) vdiff = std::max(vdiff, std::abs(v[i] - vold[i]));
        if (std::abs(norm - prev) < 1e-12 * std::max(1.0, norm) && vdiff < 1e-12) {
            r.lambda = norm;
            r.converged = true;
            break;
        }
        prev = norm;
        r.lambda = norm;
    }
    r.vec = v;
    // Residual of the eigen-equation on the kappa-power.
    std::vector<double> check(n, 0.0);
    std::vector<double> cur = v;
    for (uint64_t step = 0; step < kappa; ++step) {
        std::fill(check.begin(), check.end(), 0.0);
        for (auto& [parent, child] : edges) check[static_cast<size_t>(child)] += cur[static_cast<size_t>(parent)];
        cur = check;
    }
    double res = 0, vmax = 0;
    for (size_t i = 0; i < n; ++i) {
        res = std::max(res, std::abs(cur[i] - r.lambda * v[i]));
        vmax = std::max(vmax, v[i]);
    }
    r.residual = r.lambda > 0 ? res / (r.lambda * std::max(vmax, 1e-30)) : 0;
    return r;
}

}  // namespace

uint64_t TransitionMatrix::column_sum(size_t parent) const {
    uint64_t s = 0;
    for (size_t child = 0; child < n; ++child) s += at(child, parent);
    return s;
}

TransitionMatrix transition_matrix(const SubstSystem& sys, bool include_blank) {
    TransitionMatrix tm;
    tm.k = sys.k;
    tm.includes_blank = include_blank;
    const size_t offset = include_blank ? 0 : 1;
    tm.n = sys.states.size() - offset;
    tm.m.assign(tm.n * tm.n, 0);
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    for (size_t st = offset; st < sys.states.size(); ++st)
        for (size_t c = 0; c < k2; ++c) {
            size_t ch = static_cast<size_t>(sys.transition[st * k2 + c]);
            if (ch < offset) continue;
            ++tm.m[(ch - offset) * tm.n + (st - offset)];
        }
    return tm;
}

CellValueMap cell_values(const SubstSystem& sys, const PolyMatrix& t, const CellValue& xi) {
    const ResidueRing& ring = sys.ring;
    const int d = t.dim();
    if (static_cast<int>(xi.size()) != d) throw std::invalid_argument("cell_values: bad xi size");
    const int64_t width = sys.width();

    // v[j * width + (-i - lo)] = T^j_i * xi, the contribution of block slot
    // (j, -i) to the cell value.
    std::vector<CellValue> contrib(static_cast<size_t>(sys.m_prime * width),
                                   CellValue(static_cast<size_t>(d), 0));
    PolyMatrix p = PolyMatrix::identity(ring, d);
    for (int64_t j = 0; j < sys.m_prime; ++j) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                for (auto& [i, coeff] : p.at(r, c).coeffs()) {
                    int64_t o = -i;
                    if (o < sys.lo || o > sys.hi)
                        throw std::invalid_argument(
                            "cell_values: window does not cover support offset " + std::to_string(o) +
                            " (rebuild with rendering_window)");
                    auto& v = contrib[static_cast<size_t>(j * width + (o - sys.lo))];
                    v[static_cast<size_t>(r)] =
                        ring.add(v[static_cast<size_t>(r)], ring.mul(coeff, xi[static_cast<size_t>(c)]));
                }
        p = p * t;
    }

    CellValueMap cv;
    cv.d = d;
    cv.values.reserve(sys.states.size());
    for (auto& block : sys.states) {
        CellValue val(static_cast<size_t>(d), 0);
        for (size_t idx = 0; idx < block.size(); ++idx) {
            if (block[idx] == 0) continue;
            for (int r = 0; r < d; ++r)
                val[static_cast<size_t>(r)] = ring.add(
                    val[static_cast<size_t>(r)], ring.mul(block[idx], contrib[idx][static_cast<size_t>(r)]));
        }
        cv.values.push_back(std::move(val));
    }
    return cv;
}

int Coloring::id(const CellValue& v) const {
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] == v) return static_cast<int>(i);
    return -1;
}

std::string Coloring::label(int color) const {
    if (color == 0) return "blank";
    std::string s = "c";
    for (uint64_t d : values[static_cast<size_t>(color)]) s += std::to_string(d);
    return s;
}

Coloring Coloring::from_values(const CellValueMap& cv) {
    Coloring c;
    c.values.push_back(CellValue(static_cast<size_t>(cv.d), 0));
    std::vector<CellValue> nz;
    for (auto& v : cv.values)
        if (!is_zero_value(v)) nz.push_back(v);
    std::sort(nz.begin(), nz.end());
    nz.erase(std::unique(nz.begin(), nz.end()), nz.end());
    for (auto& v : nz) c.values.push_back(v);
    return c;
}

DimensionResult fractal_dimension(const SubstSystem& sys, uint64_t kappa) {
    DimensionResult dr;
    dr.kappa = kappa;
    auto edges = nonblank_edges(sys);
    PowerResult pr = power_iterate(edges, sys.states.size() - 1, kappa);
    dr.lambda = pr.lambda;
    dr.converged = pr.converged;
    if (pr.converged && pr.lambda > 0) {
        dr.dimension = std::log(pr.lambda) /
                       (static_cast<double>(kappa) * std::log(static_cast<double>(sys.k)));
    } else {
        dr.used_growth_fallback = true;
        dr.dimension = growth_dimension(sys, 6, 10);
    }
    return dr;
}

double growth_dimension(const SubstSystem& sys, uint64_t d1, uint64_t d2) {
    if (d2 <= d1) throw std::invalid_argument("growth_dimension: need d2 > d1");
    const size_t n = sys.states.size();
    const size_t k2 = static_cast<size_t>(sys.k * sys.k);
    std::vector<double> count(n, 0.0), next(n);
    for (auto& e : sys.seed) count[static_cast<size_t>(e.state)] += 1.0;
    double c1 = 0, c2 = 0;
    for (uint64_t depth = 1; depth <= d2; ++depth) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t st = 1; st < n; ++st) {
            if (count[st] == 0) continue;
            for (size_t c = 0; c < k2; ++c) {
                int ch = sys.transition[st * k2 + c];
                if (ch != sys.blank()) next[static_cast<size_t>(ch)] += count[st];
            }
        }
        count = next;
        double total = std::accumulate(count.begin() + 1, count.end(), 0.0);
        if (depth == d1) c1 = total;
        if (depth == d2) c2 = total;
    }
    if (c1 <= 0 || c2 <= 0) return 0;
    return std::log(c2 / c1) /
           (static_cast<double>(d2 - d1) * std::log(static_cast<double>(sys.k)));
}

HueResult average_hue(const SubstSystem& sys, const CellValueMap& cv, uint64_t kappa) {
    HueResult hr;
    hr.coloring = Coloring::from_values(cv);
    auto edges = nonblank_edges(sys);
    PowerResult pr = power_iterate(edges, sys.states.size() - 1, kappa);
    hr.reliable = pr.converged && pr.residual < 1e-8;
    hr.raw.assign(hr.coloring.values.size(), 0.0);
    for (size_t st = 1; st < sys.states.size(); ++st) {
        int color = hr.coloring.id(cv.values[st]);
        hr.raw[static_cast<size_t>(color)] += pr.vec[st - 1];
    }
    double nzsum = 0;
    for (size_t c = 1; c < hr.raw.size(); ++c) nzsum += hr.raw[c];
    hr.normalized.assign(hr.raw.size(), 0.0);
    if (nzsum > 0)
        for (size_t c = 1; c < hr.raw.size(); ++c) hr.normalized[c] = hr.raw[c] / nzsum;
    return hr;
}

Pattern make_pattern(const SubstSystem& sys, const CellValueMap& cv, uint64_t depth) {
    Pattern p;
    Grid g = expand(sys, depth);
    p.order = 1;
    for (uint64_t i = 0; i < depth; ++i) p.order *= sys.k;
    for (size_t y = 0; y < g.rows; ++y)
        for (size_t x = 0; x < g.cols; ++x) {
            int st = g.cells[y * g.cols + x];
            if (st == sys.blank()) continue;
            const CellValue& v = cv.values[static_cast<size_t>(st)];
            if (is_zero_value(v)) continue;
            p.cells[v].push_back({g.origin + static_cast<int64_t>(x), y});
        }
    return p;
}

namespace {

// Felzenszwalb 1-D squared distance transform.
void edt_1d(std::vector<double>& f) {
    const size_t n = f.size();
    if (n == 0) return;
    std::vector<double> d(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int q = 0;
    v[0] = 0;
    z[0] = -1e30;
    z[1] = 1e30;
    for (int i = 1; i < static_cast<int>(n); ++i) {
        double s;
        for (;;) {
            int p = v[static_cast<size_t>(q)];
            s = ((f[static_cast<size_t>(i)] + static_cast<double>(i) * i) -
                 (f[static_cast<size_t>(p)] + static_cast<double>(p) * p)) /
                (2.0 * (i - p));
            if (s > z[static_cast<size_t>(q)]) break;
            --q;
        }
        ++q;
        v[static_cast<size_t>(q)] = i;
        z[static_cast<size_t>(q)] = s;
        z[static_cast<size_t>(q) + 1] = 1e30;
    }
    q = 0;
    for (int i = 0; i < static_cast<int>(n); ++i) {
        while (z[static_cast<size_t>(q) + 1] < i) ++q;
        int p = v[static_cast<size_t>(q)];
        d[static_cast<size_t>(i)] = static_cast<double>(i - p) * (i - p) + f[static_cast<size_t>(p)];
    }
    f = d;
}

// 2-D squared EDT of a point set on a W x H grid (1e30 where empty).
std::vector<double> edt_2d(std::vector<double> grid, size_t w, size_t h) {
    std::vector<double> col(h);
    for (size_t x = 0; x < w; ++x) {
        for (size_t y = 0; y < h; ++y) col[y] = grid[y * w + x];
        edt_1d(col);
        for (size_t y = 0; y < h; ++y) grid[y * w + x] = col[y];
    }
    std::vector<double> row(w);
    for (size_t y = 0; y < h; ++y) {
        for (size_t x = 0; x < w; ++x) row[x] = grid[y * w + x];
        edt_1d(row);
        for (size_t x = 0; x < w; ++x) grid[y * w + x] = row[x];
    }
    return grid;
}

}  // namespace

HausdorffResult hausdorff(const Pattern& a, const Pattern& b, const CellValue& value) {
    HausdorffResult hr;
    auto ita = a.cells.find(value);
    auto itb = b.cells.find(value);
    const bool ea = (ita == a.cells.end() || ita->second.empty());
    const bool eb = (itb == b.cells.end() || itb->second.empty());
    if (ea && eb) return hr;
    if (ea != eb) {
        hr.distance = 1.0;
        hr.empty_side = true;
        return hr;
    }
    const auto& pa = ita->second;
    const auto& pb = itb->second;
    const uint64_t na = a.order, nb = b.order;
    const double correction =
        std::abs(std::sqrt(2.0) / (2.0 * static_cast<double>(na)) -
                 std::sqrt(2.0) / (2.0 * static_cast<double>(nb)));

    const uint64_t l = std::lcm(na, nb);
    const uint64_t sa = l / na, sb = l / nb;
    // Common integer grid at scale l; centers land on lattice points.
    int64_t xmin = pa[0].first * static_cast<int64_t>(sa), xmax = xmin;
    int64_t ymin = static_cast<int64_t>(pa[0].second * sa), ymax = ymin;
    auto extend = [&](const std::vector<std::pair<int64_t, uint64_t>>& pts, uint64_t s) {
        for (auto& [x, y] : pts) {
            xmin = std::min(xmin, x * static_cast<int64_t>(s));
            xmax = std::max(xmax, x * static_cast<int64_t>(s));
            ymin = std::min<int64_t>(ymin, static_cast<int64_t>(y * s));
            ymax = std::max<int64_t>(ymax, static_cast<int64_t>(y * s));
        }
    };
    extend(pa, sa);
    extend(pb, sb);
    const size_t w = static_cast<size_t>(xmax - xmin + 1);
    const size_t h = static_cast<size_t>(ymax - ymin + 1);
    if (w * h > (size_t(1) << 28)) throw std::invalid_argument("hausdorff: common grid too large");

    auto directed = [&](const std::vector<std::pair<int64_t, uint64_t>>& from, uint64_t sf,
                        const std::vector<std::pair<int64_t, uint64_t>>& to, uint64_t st) {
        std::vector<double> grid(w * h, 1e30);
        for (auto& [x, y] : to)
            grid[static_cast<size_t>(static_cast<int64_t>(y * st) - ymin) * w +
                 static_cast<size_t>(x * static_cast<int64_t>(st) - xmin)] = 0.0;
        grid = edt_2d(std::move(grid), w, h);
        double worst = 0;
        for (auto& [x, y] : from)
            worst = std::max(worst,
                             grid[static_cast<size_t>(static_cast<int64_t>(y * sf) - ymin) * w +
                                  static_cast<size_t>(x * static_cast<int64_t>(sf) - xmin)]);
        return std::sqrt(worst) / static_cast<double>(l);
    };
    hr.distance = std::max(directed(pa, sa, pb, sb), directed(pb, sb, pa, sa)) + correction;
    return hr;
}

int state_at(const SubstSystem& sys, uint64_t depth, int64_t x, uint64_t y) {
    uint64_t kn = 1;
    for (uint64_t i = 0; i < depth; ++i) kn *= sys.k;
    if (y >= kn) throw std::invalid_argument("state_at: row out of range");
    const int64_t x0 = floor_div(x, static_cast<int64_t>(kn));
    uint64_t remx = static_cast<uint64_t>(x - x0 * static_cast<int64_t>(kn));
    int st = sys.blank();
    for (auto& e : sys.seed)
        if (e.pos == x0) {
            st = e.state;
            break;
        }
    uint64_t scale = kn;
    for (uint64_t level = 0; level < depth && st != sys.blank(); ++level) {
        scale /= sys.k;
        uint64_t s = remx / scale % sys.k;
        uint64_t t = y / scale % sys.k;
        st = sys.child(st, s, t);
    }
    return st;
}

VerifyReport verify(const PolyMatrix& t, const CellValue& xi, const SubstSystem& sys,
                    uint64_t depth) {
    VerifyReport rep;
    CellValueMap cv = cell_values(sys, t, xi);
    uint64_t kn = 1;
    for (uint64_t i = 0; i < depth; ++i) kn *= sys.k;
    rep.rows = kn;
    const int64_t radius = t.radius();
    const int64_t pad = sys.width() + 1;
    const CellValue zero(static_cast<size_t>(t.dim()), 0);

    Configuration row = Configuration::delta(t.ring(), xi);
    for (uint64_t y = 0; y < kn; ++y) {
        int64_t lo = -radius * static_cast<int64_t>(y) - pad;
        int64_t hi = radius * static_cast<int64_t>(y) + pad;
        if (!row.cells().empty()) {
            lo = std::min(lo, row.cells().begin()->first - 1);
            hi = std::max(hi, row.cells().rbegin()->first + 1);
        }
        for (int64_t x = lo; x <= hi; ++x) {
            const CellValue sim = row.get(x);
            int st = state_at(sys, depth, x, y);
            const CellValue& sub = st == sys.blank() ? zero : cv.values[static_cast<size_t>(st)];
            ++rep.cells_checked;
            if (sim != sub) {
                rep.fail_x = x;
                rep.fail_y = y;
                std::ostringstream os;
                os << "mismatch at x=" << x << " y=" << y;
                rep.message = os.str();
                return rep;
            }
        }
        if (y + 1 < kn) row = step(row, t);
    }
    rep.ok = true;
    rep.message = "ok";
    return rep;
}

}  // namespace fca
