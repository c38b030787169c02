#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fca/ca_engine.hpp"
#include "fca/group_embed.hpp"

namespace fca {

/// Parse error with 1-based line/column position.
struct SpecError : std::runtime_error {
    int line;
    int column;
    SpecError(int line_, int column_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + what),
          line(line_),
          column(column_) {}
};

struct CaSpecFile {
    enum class Kind { Matrix, Group, Field };
    Kind kind = Kind::Matrix;

    ResidueRing ring;
    int dim = 0;
    std::vector<LaurentPoly> entries;  // row-major, dim x dim (Matrix kind)

    // Group kind: cyclic factor orders and generator images.
    std::vector<uint64_t> group_orders;
    std::vector<std::vector<uint64_t>> endo_images;

    // Field kind: F_{p^e} data; entry coefficients are polynomials in w.
    uint64_t field_p = 2;
    uint32_t field_e = 1;
    std::vector<uint64_t> field_modulus;
    std::vector<std::map<int64_t, FieldElem>> field_entries;  // row-major

    CellValue init;  // empty means the default (1, 0, ..., 0)
    std::vector<std::pair<CellValue, std::array<uint8_t, 3>>> palette;
};

CaSpecFile parse_spec(const std::string& text);

/// Canonical text form; parse(print(f)) reproduces f.
std::string print_spec(const CaSpecFile& f);

/// Resolve the spec to the canonical matrix form (group embedding or field
/// flattening applied as needed).
struct ResolvedCa {
    PolyMatrix matrix;
    CellValue init;  // in matrix coordinates
};

ResolvedCa resolve(const CaSpecFile& f);

}  // namespace fca
