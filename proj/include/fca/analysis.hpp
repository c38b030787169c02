#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fca/ca_engine.hpp"
#include "fca/substitution.hpp"

namespace fca {

/// Child counts of the substitution: M[child][parent] = number of (s,t) pairs
/// mapping the parent to that child. Columns sum to k^2 when blank is kept.
struct TransitionMatrix {
    size_t n = 0;
    uint64_t k = 2;
    bool includes_blank = true;
    std::vector<uint64_t> m;  // row-major, n x n

    uint64_t at(size_t child, size_t parent) const { return m[child * n + parent]; }
    uint64_t column_sum(size_t parent) const;
};

TransitionMatrix transition_matrix(const SubstSystem& sys, bool include_blank = true);

/// Per-state cell values: value = sum_{j<m'} sum_i block(j,-i) * T^j_i * xi.
/// Requires the window to cover -supp(T^j) for all j < m' (build-time check;
/// see rendering_window).
struct CellValueMap {
    int d = 0;
    std::vector<CellValue> values;  // indexed by state
};

CellValueMap cell_values(const SubstSystem& sys, const PolyMatrix& t, const CellValue& xi);

/// Cell value -> color id; the zero value is always color 0 (blank/white).
/// Nonzero values get ids 1.. in lexicographic order.
struct Coloring {
    std::vector<CellValue> values;  // index = color id; values[0] is the zero vector

    int id(const CellValue& v) const;
    /// Digit-string label, e.g. (1,0) -> "c10"; color 0 -> "blank".
    std::string label(int color) const;
    static Coloring from_values(const CellValueMap& cv);
};

struct DimensionResult {
    double dimension = 0;
    double lambda = 0;  // spectral radius of the non-blank block (of Gamma^kappa)
    uint64_t kappa = 1;
    bool converged = false;
    bool used_growth_fallback = false;
};

/// log_k of the spectral radius of the non-blank transition matrix, computed
/// by power iteration (tolerance 1e-10, at most 1e5 iterations, all-ones
/// start); on Gamma^kappa, dividing by kappa, when kappa > 1.
DimensionResult fractal_dimension(const SubstSystem& sys, uint64_t kappa = 1);

/// Dimension estimate from exact non-blank cell counts at two depths.
double growth_dimension(const SubstSystem& sys, uint64_t d1, uint64_t d2);

struct HueResult {
    Coloring coloring;
    std::vector<double> raw;         // per color id (0 = white/blank-valued)
    std::vector<double> normalized;  // over nonzero colors, summing to 1
    bool reliable = false;
};

/// Color weights from the Perron right eigenvector of the non-blank
/// transition matrix, grouped by the cell value of each state.
HueResult average_hue(const SubstSystem& sys, const CellValueMap& cv, uint64_t kappa = 1);

/// Colored pattern of a depth-n expansion: per nonzero cell value, the filled
/// unit squares (x, y); geometry is normalized by `order` = k^n.
struct Pattern {
    uint64_t order = 1;
    std::map<CellValue, std::vector<std::pair<int64_t, uint64_t>>> cells;
};

Pattern make_pattern(const SubstSystem& sys, const CellValueMap& cv, uint64_t depth);

struct HausdorffResult {
    double distance = 0;
    bool empty_side = false;  // one side empty: distance pinned to 1
};

/// Symmetric Hausdorff distance between the unit-normalized square sets of
/// one cell value, computed on square centers with the half-diagonal
/// correction for the differing square sizes.
HausdorffResult hausdorff(const Pattern& a, const Pattern& b, const CellValue& value);

/// State of the depth-n expansion at (x, y) without materializing the grid.
int state_at(const SubstSystem& sys, uint64_t depth, int64_t x, uint64_t y);

struct VerifyReport {
    bool ok = false;
    uint64_t cells_checked = 0;
    uint64_t rows = 0;
    int64_t fail_x = 0;
    uint64_t fail_y = 0;
    std::string message;
};

/// Cell-for-cell comparison of the substitution expansion against direct
/// simulation over the full light cone, k^depth rows.
VerifyReport verify(const PolyMatrix& t, const CellValue& xi, const SubstSystem& sys,
                    uint64_t depth);

}  // namespace fca
