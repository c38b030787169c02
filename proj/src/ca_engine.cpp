#include "fca/ca_engine.hpp"

#include <algorithm>

namespace fca {

namespace {

bool all_zero(const CellValue& v) {
    return std::all_of(v.begin(), v.end(), [](uint64_t x) { return x == 0; });
}

}  // namespace

void Configuration::set(int64_t x, CellValue v) {
    if (static_cast<int>(v.size()) != d_) throw std::invalid_argument("Configuration: bad vector size");
    for (auto& c : v) c %= ring_.modulus;
    if (all_zero(v))
        cells_.erase(x);
    else
        cells_[x] = std::move(v);
}

void Configuration::add(int64_t x, const CellValue& v) {
    if (static_cast<int>(v.size()) != d_) throw std::invalid_argument("Configuration: bad vector size");
    auto it = cells_.find(x);
    if (it == cells_.end()) {
        set(x, v);
        return;
    }
    for (int i = 0; i < d_; ++i) it->second[static_cast<size_t>(i)] = ring_.add(it->second[static_cast<size_t>(i)], v[static_cast<size_t>(i)]);
    if (all_zero(it->second)) cells_.erase(it);
}

Configuration Configuration::shifted(int64_t n) const {
    Configuration r(ring_, d_);
    for (auto& [x, v] : cells_) r.cells_[x + n] = v;
    return r;
}

Configuration Configuration::operator+(const Configuration& o) const {
    Configuration r = *this;
    for (auto& [x, v] : o.cells_) r.add(x, v);
    return r;
}

Configuration Configuration::reduced_to(ResidueRing target) const {
    Configuration r(target, d_);
    for (auto& [x, v] : cells_) {
        CellValue w(v.size());
        for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] % target.modulus;
        r.set(x, std::move(w));
    }
    return r;
}

std::pair<int64_t, int64_t> Diagram::window() const {
    int64_t lo = 0, hi = -1;
    bool any = false;
    for (auto& row : rows) {
        if (row.cells().empty()) continue;
        int64_t rlo = row.cells().begin()->first;
        int64_t rhi = row.cells().rbegin()->first;
        if (!any) {
            lo = rlo;
            hi = rhi;
            any = true;
        } else {
            lo = std::min(lo, rlo);
            hi = std::max(hi, rhi);
        }
    }
    return {lo, hi};
}

Configuration step(const Configuration& c, const PolyMatrix& t) {
    if (c.ring() != t.ring() || c.dim() != t.dim())
        throw std::invalid_argument("step: ring/dimension mismatch");
    const ResidueRing& ring = c.ring();
    const int d = c.dim();
    Configuration out(ring, d);
    // Scatter: the cell at z contributes T_i * c(z) to position z + i.
    for (auto& [z, v] : c.cells()) {
        for (int row = 0; row < d; ++row)
            for (int col = 0; col < d; ++col)
                for (auto& [i, coeff] : t.at(row, col).coeffs()) {
                    CellValue add(static_cast<size_t>(d), 0);
                    add[static_cast<size_t>(row)] = ring.mul(coeff, v[static_cast<size_t>(col)]);
                    out.add(z + i, add);
                }
    }
    return out;
}

Diagram spacetime(const PolyMatrix& t, const CellValue& xi, uint64_t steps) {
    Diagram d;
    d.rows.push_back(Configuration::delta(t.ring(), xi));
    for (uint64_t y = 0; y < steps; ++y) d.rows.push_back(step(d.rows.back(), t));
    return d;
}

DualIdentityReport check_dual_identity(const PolyMatrix& t, int n_max) {
    DualIdentityReport rep;
    if (t.ring().p != 2 || t.ring().l != 1) {
        rep.message = "requires characteristic 2 (p=2, l=1)";
        return rep;
    }
    if (t.dim() != 2) {
        rep.message = "requires dimension 2";
        return rep;
    }
    LaurentPoly dt = det(t);
    if (dt.coeffs().size() != 1 || dt.coeffs().begin()->second != 1) {
        rep.message = "requires unit-monomial determinant";
        return rep;
    }
    rep.supported = true;

    PolyMatrix td = dual(t);
    rep.trace_match = (trace(t) == trace(td));

    PolyMatrix tp = t;          // T^{2^n}
    PolyMatrix tdp = td;        // dual(T)^{2^n}
    LaurentPoly trp = trace(t); // (tr T)^{2^n}
    const PolyMatrix id = PolyMatrix::identity(t.ring(), 2);
    rep.holds = true;
    for (int n = 0; n <= n_max; ++n) {
        if (tp != tdp + id.scaled(trp)) {
            rep.holds = false;
            rep.failed_n = n;
            break;
        }
        if (n < n_max) {
            tp = tp * tp;
            tdp = tdp * tdp;
            trp = trp * trp;
        }
    }
    return rep;
}

FermatVerdict is_weakly_p_fermat(const PolyMatrix& t, const CellValue& seed, uint64_t p,
                                 uint64_t horizon) {
    FermatVerdict v;
    v.horizon = horizon;
    Diagram d = spacetime(t, seed, horizon);
    for (uint64_t n = 0; n * p <= horizon; ++n) {
        const Configuration& coarse = d.rows[static_cast<size_t>(n)];
        const Configuration& fine = d.rows[static_cast<size_t>(n * p)];
        // Zero-set comparison: T^{np}(s)_x == 0 iff (pi_p T^n(s))_x == 0.
        // The scaled configuration is nonzero exactly at x = p*y with
        // T^n(s)_y nonzero, so compare supports directly.
        int64_t lo = 0, hi = 0;
        if (!fine.cells().empty()) {
            lo = fine.cells().begin()->first;
            hi = fine.cells().rbegin()->first;
        }
        if (!coarse.cells().empty()) {
            lo = std::min(lo, coarse.cells().begin()->first * static_cast<int64_t>(p));
            hi = std::max(hi, coarse.cells().rbegin()->first * static_cast<int64_t>(p));
        }
        for (int64_t x = lo; x <= hi; ++x) {
            bool fine_zero = fine.cells().find(x) == fine.cells().end();
            bool scaled_zero = true;
            if (x % static_cast<int64_t>(p) == 0)
                scaled_zero = coarse.cells().find(x / static_cast<int64_t>(p)) == coarse.cells().end();
            if (fine_zero != scaled_zero) {
                v.violation_found = true;
                v.n = n;
                v.x = x;
                return v;
            }
        }
    }
    return v;
}

}  // namespace fca
