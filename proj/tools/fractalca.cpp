#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fca/analysis.hpp"
#include "fca/ca_spec.hpp"
#include "fca/ppm.hpp"

namespace {

using namespace fca;

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitMismatch = 3;

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

CaSpecFile load_spec(const std::string& path) {
    std::string text = slurp(path);
    try {
        return parse_spec(text);
    } catch (const SpecError& e) {
        throw ParseFailure(path + ": " + e.what());
    }
}

SubstSystem load_system(const std::string& path) {
    try {
        return deserialize(slurp(path));
    } catch (const std::invalid_argument& e) {
        throw ParseFailure(path + ": " + e.what());
    }
}

struct Derived {
    Relation rel;
    LeafTables tables;
    Window window;
    SubstSystem sys;
};

Derived derive_pipeline(const ResolvedCa& ca, bool refined, bool have_override, int64_t wlo,
                        int64_t whi) {
    Derived d{Relation{ca.matrix.ring()}, {}, {}, {}};
    MonicPoly pi = char_poly(ca.matrix);
    if (!poly_eval(pi, ca.matrix).is_zero())
        throw std::runtime_error("internal error: characteristic polynomial does not annihilate");
    d.rel = derive_relation(pi, ca.matrix.ring());
    d.tables = leaf_tables(d.rel);
    d.window = compute_window(d.tables, d.rel.k, refined);
    if (have_override) {
        d.window.lo = wlo;
        d.window.hi = whi;
        if (!window_is_closed(d.tables, d.rel.k, wlo, whi))
            throw std::runtime_error("requested window [" + std::to_string(wlo) + "," +
                                     std::to_string(whi) + "] is not closed under the child maps");
    }
    d.window = rendering_window(ca.matrix, d.rel, d.tables, d.window);
    d.sys = build_substitution(d.rel, d.tables, d.window);
    return d;
}

std::array<uint8_t, 3> color_for(const CaSpecFile& spec, const Coloring& coloring, int id) {
    if (id == 0) return {255, 255, 255};
    for (auto& [value, rgb] : spec.palette)
        if (value == coloring.values[static_cast<size_t>(id)]) return rgb;
    return default_color(id);
}

int cmd_simulate(const std::string& spec_path, uint64_t steps, const std::string& out) {
    CaSpecFile spec = load_spec(spec_path);
    ResolvedCa ca = resolve(spec);
    Diagram diag = spacetime(ca.matrix, ca.init, steps);

    std::vector<CellValue> values;
    for (auto& row : diag.rows)
        for (auto& [x, v] : row.cells()) values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    Coloring coloring;
    coloring.values.push_back(CellValue(static_cast<size_t>(ca.matrix.dim()), 0));
    for (auto& v : values) coloring.values.push_back(v);

    auto [lo, hi] = diag.window();
    if (hi < lo) {
        lo = 0;
        hi = 0;
    }
    Image img = make_image(static_cast<size_t>(hi - lo + 1), diag.rows.size());
    for (size_t y = 0; y < diag.rows.size(); ++y)
        for (auto& [x, v] : diag.rows[y].cells())
            img.set(static_cast<size_t>(x - lo), y, color_for(spec, coloring, coloring.id(v)));
    write_file_atomic(out, ppm_bytes(img));
    std::cout << "width=" << img.width << " height=" << img.height << " colors="
              << coloring.values.size() - 1 << "\n";
    return 0;
}

int cmd_derive(const std::string& spec_path, const std::string& out, bool refined,
               bool have_override, int64_t wlo, int64_t whi) {
    CaSpecFile spec = load_spec(spec_path);
    ResolvedCa ca = resolve(spec);
    Derived d = derive_pipeline(ca, refined, have_override, wlo, whi);
    SubstGraph g = graph_analysis(d.sys);
    if (!out.empty()) write_file_atomic(out, serialize(d.sys));
    std::cout << "k=" << d.rel.k << "\n"
              << "m'=" << d.rel.m_prime << "\n"
              << "alphabet=" << d.sys.states.size() << "\n"
              << "window=[" << d.sys.lo << "," << d.sys.hi << "]\n"
              << "kappa=" << g.kappa << "\n";
    return 0;
}

int cmd_render(const std::string& sys_path, uint64_t depth, const std::string& out,
               const std::string& spec_path) {
    SubstSystem sys = load_system(sys_path);
    uint64_t rows = 1;
    for (uint64_t i = 0; i < depth; ++i) {
        rows *= sys.k;
        if (rows > (uint64_t(1) << 14)) throw std::runtime_error("depth too large to render");
    }
    Grid g = expand(sys, depth);
    Image img = make_image(g.cols, g.rows);
    if (!spec_path.empty()) {
        CaSpecFile spec = load_spec(spec_path);
        ResolvedCa ca = resolve(spec);
        CellValueMap cv = cell_values(sys, ca.matrix, ca.init);
        Coloring coloring = Coloring::from_values(cv);
        for (size_t y = 0; y < g.rows; ++y)
            for (size_t x = 0; x < g.cols; ++x) {
                int st = g.cells[y * g.cols + x];
                if (st == sys.blank()) continue;
                img.set(x, y, color_for(spec, coloring, coloring.id(cv.values[static_cast<size_t>(st)])));
            }
    } else {
        for (size_t y = 0; y < g.rows; ++y)
            for (size_t x = 0; x < g.cols; ++x) {
                int st = g.cells[y * g.cols + x];
                if (st == sys.blank()) continue;
                img.set(x, y, default_color(st));
            }
    }
    write_file_atomic(out, ppm_bytes(img));
    std::cout << "width=" << img.width << " height=" << img.height << "\n";
    return 0;
}

int cmd_dimension(const std::string& sys_path) {
    SubstSystem sys = load_system(sys_path);
    SubstGraph g = graph_analysis(sys);
    DimensionResult dr = fractal_dimension(sys, g.kappa);
    std::printf("dimension=%.9f\nlambda=%.9f\nkappa=%llu\nconverged=%d\nfallback=%d\n",
                dr.dimension, dr.lambda, static_cast<unsigned long long>(dr.kappa),
                dr.converged ? 1 : 0, dr.used_growth_fallback ? 1 : 0);
    return 0;
}

int cmd_hue(const std::string& sys_path, const std::string& spec_path) {
    SubstSystem sys = load_system(sys_path);
    CaSpecFile spec = load_spec(spec_path);
    ResolvedCa ca = resolve(spec);
    CellValueMap cv = cell_values(sys, ca.matrix, ca.init);
    SubstGraph g = graph_analysis(sys);
    HueResult hue = average_hue(sys, cv, g.kappa);
    std::cout << "reliable=" << (hue.reliable ? 1 : 0) << "\n";
    for (size_t c = 1; c < hue.raw.size(); ++c)
        std::printf("%s raw=%.9f normalized=%.9f\n", hue.coloring.label(static_cast<int>(c)).c_str(),
                    hue.raw[c], hue.normalized[c]);
    return 0;
}

int cmd_verify(const std::string& spec_path, uint64_t depth, bool refined, bool have_override,
               int64_t wlo, int64_t whi) {
    CaSpecFile spec = load_spec(spec_path);
    ResolvedCa ca = resolve(spec);
    Derived d = derive_pipeline(ca, refined, have_override, wlo, whi);
    VerifyReport rep = verify(ca.matrix, ca.init, d.sys, depth);
    std::cout << "ok=" << (rep.ok ? 1 : 0) << "\nrows=" << rep.rows
              << "\ncells=" << rep.cells_checked << "\nmessage=" << rep.message << "\n";
    return rep.ok ? 0 : kExitMismatch;
}

int cmd_graph(const std::string& sys_path, const std::string& dot_path, bool filter) {
    SubstSystem sys = load_system(sys_path);
    SubstGraph g = graph_analysis(sys, filter);
    if (!dot_path.empty()) {
        std::ostringstream os;
        os << "digraph substitution {\n";
        for (size_t i = 0; i < g.sccs.size(); ++i)
            for (int v : g.sccs[i])
                os << "  s" << v << " [label=\"" << sys.encode(v) << "\\nscc=" << i
                   << " period=" << g.periods[i] << "\"];\n";
        const size_t k2 = static_cast<size_t>(sys.k * sys.k);
        for (size_t st = 0; st < sys.states.size(); ++st) {
            if (g.comp[st] < 0) continue;
            std::map<int, int> mult;
            for (size_t c = 0; c < k2; ++c) {
                int ch = sys.transition[st * k2 + c];
                if (ch != sys.blank() && g.comp[static_cast<size_t>(ch)] >= 0) ++mult[ch];
            }
            for (auto& [ch, m] : mult) {
                os << "  s" << st << " -> s" << ch;
                if (m > 1) os << " [label=\"x" << m << "\"]";
                os << ";\n";
            }
        }
        os << "}\n";
        write_file_atomic(dot_path, os.str());
    }
    std::cout << "states=" << sys.states.size() << "\nsccs=" << g.sccs.size() << "\nkappa=" << g.kappa
              << "\n";
    for (size_t i = 0; i < g.sccs.size(); ++i)
        std::cout << "scc" << i << " size=" << g.sccs[i].size() << " period=" << g.periods[i] << "\n";
    return 0;
}

int cmd_fermat(const std::string& spec_path, uint64_t p, uint64_t horizon) {
    CaSpecFile spec = load_spec(spec_path);
    ResolvedCa ca = resolve(spec);
    FermatVerdict v = is_weakly_p_fermat(ca.matrix, ca.init, p, horizon);
    if (v.violation_found)
        std::cout << "violation=1\nn=" << v.n << "\nx=" << v.x << "\nhorizon=" << v.horizon << "\n";
    else
        std::cout << "violation=0\nhorizon=" << v.horizon << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear cellular automata: simulation, substitution systems, fractal analysis"};
    app.require_subcommand(1);

    std::string spec_path, sys_path, out_path, dot_path;
    uint64_t steps = 0, depth = 0, fermat_p = 2, horizon = 8;
    bool refined = false, filter = false;
    std::vector<int64_t> window;

    auto* sim = app.add_subcommand("simulate", "direct spacetime diagram to PPM");
    sim->add_option("--spec", spec_path)->required();
    sim->add_option("--steps", steps)->required();
    sim->add_option("--out", out_path)->required();

    auto* der = app.add_subcommand("derive", "derive the matrix substitution system");
    der->add_option("--spec", spec_path)->required();
    der->add_option("--out", out_path);
    der->add_option("--window", window)->expected(2);
    der->add_flag("--refined", refined, "search for the smallest closed window");

    auto* ren = app.add_subcommand("render", "expand a substitution system to PPM");
    ren->add_option("--system", sys_path)->required();
    ren->add_option("--depth", depth)->required();
    ren->add_option("--out", out_path)->required();
    ren->add_option("--spec", spec_path, "color by cell values of this automaton");

    auto* dim = app.add_subcommand("dimension", "fractal dimension of a substitution system");
    dim->add_option("--system", sys_path)->required();

    auto* hue = app.add_subcommand("hue", "average hue weights");
    hue->add_option("--system", sys_path)->required();
    hue->add_option("--spec", spec_path)->required();

    auto* ver = app.add_subcommand("verify", "substitution expansion vs direct simulation");
    ver->add_option("--spec", spec_path)->required();
    ver->add_option("--depth", depth)->required();
    ver->add_option("--window", window)->expected(2);
    ver->add_flag("--refined", refined);

    auto* gra = app.add_subcommand("graph", "substitution graph analysis / dot export");
    gra->add_option("--system", sys_path)->required();
    gra->add_option("--dot", dot_path);
    gra->add_flag("--checkerboard-filter", filter);

    auto* fer = app.add_subcommand("fermat", "weakly p-Fermat diagnostic");
    fer->add_option("--spec", spec_path)->required();
    fer->add_option("--p", fermat_p)->required();
    fer->add_option("--horizon", horizon)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const bool have_window = window.size() == 2;
        if (sim->parsed()) return cmd_simulate(spec_path, steps, out_path);
        if (der->parsed())
            return cmd_derive(spec_path, out_path, refined, have_window,
                              have_window ? window[0] : 0, have_window ? window[1] : 0);
        if (ren->parsed()) return cmd_render(sys_path, depth, out_path, spec_path);
        if (dim->parsed()) return cmd_dimension(sys_path);
        if (hue->parsed()) return cmd_hue(sys_path, spec_path);
        if (ver->parsed())
            return cmd_verify(spec_path, depth, refined, have_window, have_window ? window[0] : 0,
                              have_window ? window[1] : 0);
        if (gra->parsed()) return cmd_graph(sys_path, dot_path, filter);
        if (fer->parsed()) return cmd_fermat(spec_path, fermat_p, horizon);
    } catch (const ParseFailure& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
