#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fca/recursion.hpp"

namespace fca {

/// A substitution symbol: the grouped block of alpha-coefficients around one
/// position. Entry (j, o) with j < m' and o in [lo, hi] holds alpha_j(x+o, y),
/// stored as digits in canonical order (j-major, o ascending).
using Block = std::vector<uint32_t>;

/// Per-(s,t) linear maps sending a parent block beta(x,y) to the child block
/// beta(kx+s, ky+t). Each map is a list of (output index, input index, coeff).
struct ChildMaps {
    uint64_t k = 2;
    int64_t m_prime = 1;
    int64_t lo = 0, hi = 0;
    /// Indexed [t * k + s].
    std::vector<std::vector<std::array<int64_t, 3>>> maps;

    int64_t width() const { return hi - lo + 1; }
    size_t block_size() const { return static_cast<size_t>(m_prime * width()); }
    const std::vector<std::array<int64_t, 3>>& map(uint64_t s, uint64_t t) const {
        return maps[static_cast<size_t>(t * k + s)];
    }
};

/// Build the child maps from the leaf tables; throws if the window is not
/// closed (the error names the offending offset).
ChildMaps child_maps(const LeafTables& tables, int64_t lo, int64_t hi);

Block apply_child(const ChildMaps& maps, const ResidueRing& ring, const Block& block,
                  uint64_t s, uint64_t t);

struct SeedEntry {
    int64_t pos;
    int state;
};

struct SubstSystem {
    ResidueRing ring;
    uint64_t k = 2;
    int64_t m_prime = 1;
    int64_t lo = 0, hi = 0;
    /// Alphabet, sorted by canonical encoding; index 0 is always the blank.
    std::vector<Block> states;
    /// Child state indices, indexed [state * k^2 + t * k + s].
    std::vector<int> transition;
    /// Row y = 0; positions not listed are blank. Sorted by position.
    std::vector<SeedEntry> seed;

    int64_t width() const { return hi - lo + 1; }
    int blank() const { return 0; }
    int child(int state, uint64_t s, uint64_t t) const {
        return transition[static_cast<size_t>(state) * k * k + t * k + s];
    }
    /// Fixed-width hex encoding of the canonical digit packing.
    std::string encode(int state) const;
};

struct BuildOptions {
    /// Enumerate the full block space instead of the reachable closure;
    /// rejected when it exceeds 2^16 states.
    bool full_space = false;
};

/// Row y = 0 as blocks: alpha_j(z,0) = [ (j,z) == (0,0) ].
std::vector<std::pair<int64_t, Block>> seed_blocks(const Relation& rel, int64_t lo, int64_t hi);

SubstSystem build_substitution(const Relation& rel, const LeafTables& tables, const Window& w,
                               const BuildOptions& opt = {});

/// Window large enough that every block determines its own cell value:
/// -supp(T^j) for j < m' must lie inside, and the result is re-closed.
Window rendering_window(const PolyMatrix& t, const Relation& rel, const LeafTables& tables,
                        const Window& base);

/// Dense expansion of the seed word to depth n (k^n rows).
struct Grid {
    int64_t origin = 0;  // position of column 0
    size_t cols = 0;
    size_t rows = 0;
    std::vector<int> cells;  // row-major state indices

    int at(int64_t x, size_t y) const {
        int64_t c = x - origin;
        if (y >= rows || c < 0 || c >= static_cast<int64_t>(cols)) return 0;
        return cells[y * cols + static_cast<size_t>(c)];
    }
};

Grid expand(const SubstSystem& sys, uint64_t n);

struct SubstGraph {
    /// state -> SCC id; -1 for the blank and for filtered-out states.
    std::vector<int> comp;
    std::vector<std::vector<int>> sccs;  // reverse topological order
    std::vector<uint64_t> periods;       // per SCC; 0 for a trivial SCC without self-loop
    uint64_t kappa = 1;
};

/// SCC decomposition, per-SCC periods, and the aperiodic power kappa of the
/// graph on the non-blank states. With `checkerboard_filter`, states from
/// which the blank is unreachable are dropped first.
SubstGraph graph_analysis(const SubstSystem& sys, bool checkerboard_filter = false);

/// States from which the blank state is reachable (always includes blank).
std::vector<bool> blank_reachable(const SubstSystem& sys);

std::string serialize(const SubstSystem& sys);
SubstSystem deserialize(const std::string& text);

}  // namespace fca
