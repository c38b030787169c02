#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fca/poly_matrix.hpp"

namespace fca {

using CellValue = std::vector<uint64_t>;  // vector in R^d

/// Finitely supported configuration: position -> nonzero vector in R^d.
class Configuration {
public:
    Configuration(ResidueRing ring, int d) : ring_(ring), d_(d) {}

    const ResidueRing& ring() const { return ring_; }
    int dim() const { return d_; }
    const std::map<int64_t, CellValue>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }

    CellValue get(int64_t x) const {
        auto it = cells_.find(x);
        return it == cells_.end() ? CellValue(static_cast<size_t>(d_), 0) : it->second;
    }

    void set(int64_t x, CellValue v);
    void add(int64_t x, const CellValue& v);

    static Configuration delta(ResidueRing ring, const CellValue& xi, int64_t pos = 0) {
        Configuration c(ring, static_cast<int>(xi.size()));
        c.set(pos, xi);
        return c;
    }

    Configuration shifted(int64_t n) const;
    Configuration operator+(const Configuration& o) const;
    Configuration reduced_to(ResidueRing target) const;
    bool operator==(const Configuration& o) const { return cells_ == o.cells_; }

private:
    ResidueRing ring_;
    int d_;
    std::map<int64_t, CellValue> cells_;
};

/// Spacetime diagram: row y is T^y applied to the initial configuration.
struct Diagram {
    std::vector<Configuration> rows;

    size_t steps() const { return rows.empty() ? 0 : rows.size() - 1; }
    /// Bounding window over all rows; (0, -1) when entirely blank.
    std::pair<int64_t, int64_t> window() const;
};

/// One application of the global transition: out(x) = sum_i T_i c(x - i).
Configuration step(const Configuration& c, const PolyMatrix& t);

Diagram spacetime(const PolyMatrix& t, const CellValue& xi, uint64_t steps);

struct DualIdentityReport {
    bool supported = false;   // preconditions met
    bool holds = false;       // identity verified for all n <= n_max
    bool trace_match = false; // tr T == tr dual(T)
    int failed_n = -1;
    std::string message;
};

/// Checks T^{2^n} == dual(T)^{2^n} + (tr T)^{2^n} I for n <= n_max.
/// Requires p = 2, l = 1, d = 2 and unit-monomial determinant.
DualIdentityReport check_dual_identity(const PolyMatrix& t, int n_max);

struct FermatVerdict {
    bool violation_found = false;
    uint64_t n = 0;  // violation at T^{np} vs scaled T^n
    int64_t x = 0;
    uint64_t horizon = 0;
};

/// Weak p-Fermat diagnostic on the single-seed word s-bar, searched up to
/// the given horizon of time steps.
FermatVerdict is_weakly_p_fermat(const PolyMatrix& t, const CellValue& seed, uint64_t p,
                                 uint64_t horizon);

}  // namespace fca
