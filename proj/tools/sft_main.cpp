// Command-line surface of the library: solving and counting tilings,
// packing checks, tree/order/rank queries, self-simulation diagnostics,
// and SVG rendering.
//
// Conventions shared by every subcommand:
//   * exit 0: success; exit 1: negative verdict (UNSAT, NO_TCPE, violations,
//     failed verification); exit 2: usage or input parse error; exit 3:
//     resource limit (node budget, rank step cap).
//   * a run manifest (command line, content hashes of all inputs read,
//     tool version, seed, wall time) is written to stderr, or to the file
//     given with --manifest.
//   * default output is human-readable; --porcelain switches every
//     subcommand to line-oriented key=value output.  Both modes write to
//     stdout and are byte-reproducible; the wall-time line lives only in
//     the manifest.

#include "CLI11.hpp"

#include "sft/errors.hpp"
#include "sft/grid.hpp"
#include "sft/hierarchy.hpp"
#include "sft/orders.hpp"
#include "sft/render.hpp"
#include "sft/selfsim.hpp"
#include "sft/solver.hpp"
#include "sft/squares.hpp"
#include "sft/trees.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "sftlab/1.0.0";

// A file parsed incorrectly; carries the user-facing location message.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// FNV-1a 64-bit content hash; a stable reproducibility key, not a
// cryptographic digest.
std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Manifest {
    std::string command;
    std::vector<std::string> inputs;  // "input.<path>=fnv1a64:<hash> bytes=<n>"
    std::uint64_t seed = 0;
    std::string out_path;  // empty: stderr

    void write(double wall_ms) const {
        std::ostringstream m;
        m << "command=" << command << "\n";
        m << "version=" << kVersion << "\n";
        for (const auto& line : inputs) m << line << "\n";
        m << "seed=" << seed << "\n";
        m << "wall_ms=" << static_cast<long long>(wall_ms) << "\n";
        if (out_path.empty()) {
            std::cerr << m.str();
        } else {
            std::ofstream f(out_path);
            f << m.str();
        }
    }
};

Manifest g_manifest;

std::string read_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();
    g_manifest.inputs.push_back("input." + path + "=fnv1a64:" + fnv1a64(data) +
                                " bytes=" + std::to_string(data.size()));
    return data;
}

// Collected output lines; exactly one of the two views is printed.
struct Report {
    bool porcelain = false;
    std::ostringstream kv, human;

    void line(const std::string& key, const std::string& value,
              const std::string& human_line) {
        kv << key << "=" << value << "\n";
        if (!human_line.empty()) human << human_line << "\n";
    }
    void line(const std::string& key, const std::string& value) {
        line(key, value, key + ": " + value);
    }
    void flush() const { std::cout << (porcelain ? kv.str() : human.str()); }
};

std::uint64_t default_budget() {
    if (const char* env = std::getenv("SFT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw InputError("SFT_BUDGET must be a positive integer");
    }
    return 50'000'000ULL;
}

const sft::Alphabet& alphabet_by_name(const std::string& name) {
    static const sft::Alphabet binary = sft::Alphabet::binary();
    if (name == "binary") return binary;
    if (name == "arrows") return sft::arrow_alphabet();
    throw InputError("unknown alphabet '" + name + "' (binary, arrows)");
}

// Sniffs "pattern <alphabet> ..." / "periodic <w> <h>" and parses either.
struct GridInput {
    bool periodic = false;
    sft::Pattern pattern;
    sft::PeriodicConfig config;
    const sft::Alphabet* alphabet = nullptr;
};

GridInput parse_grid_input(const std::string& text, const std::string& alphabet_flag) {
    std::istringstream probe(text);
    std::string head, second;
    probe >> head >> second;
    GridInput g;
    std::istringstream in(text);
    try {
        if (head == "pattern") {
            g.alphabet = &alphabet_by_name(second);
            g.pattern = sft::pattern_from_text(in, *g.alphabet);
        } else if (head == "periodic") {
            g.alphabet = &alphabet_by_name(alphabet_flag);
            g.periodic = true;
            g.config = sft::periodic_from_text(in, *g.alphabet);
        } else {
            throw InputError("expected 'pattern' or 'periodic' header, got '" + head + "'");
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    return g;
}

sft::LabelTree parse_tree_file(const std::string& path) {
    std::string text = read_input_file(path);
    try {
        return sft::tree_from_text(text);
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

// Machine spec: "looping", "halt:<k>", or a file
//   machine <nstates>
//   <state> <read> <write> <L|R> <next-state>     (missing rows halt)
sft::ToyMachine parse_machine_spec(const std::string& spec) {
    if (spec == "looping") return sft::ToyMachine::looping();
    if (spec.rfind("halt:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(spec.substr(5));
        } catch (const std::exception&) {
            throw InputError("bad machine spec '" + spec + "'");
        }
        if (k < 0) throw InputError("halt step count must be >= 0");
        return sft::ToyMachine::halting_at(k);
    }
    std::istringstream in(read_input_file(spec));
    std::string head;
    int nstates = 0;
    if (!(in >> head >> nstates) || head != "machine" || nstates <= 0)
        throw InputError(spec + ": expected header 'machine <nstates>'");
    std::vector<sft::ToyMachine::Row> table(static_cast<size_t>(nstates));
    int state = 0, read = 0, write = 0, next = 0;
    std::string move;
    int lineno = 1;
    while (in >> state >> read >> write >> move >> next) {
        ++lineno;
        if (state < 0 || state >= nstates || read < 0 || read > 1 || write < 0 ||
            write > 1 || next < 0 || next >= nstates || (move != "L" && move != "R"))
            throw InputError(spec + ": line " + std::to_string(lineno) +
                             ": bad transition row");
        table[static_cast<size_t>(state)][static_cast<size_t>(read)] =
            sft::MachineStep{next, write, move == "L" ? -1 : 1};
    }
    if (!in.eof())
        throw InputError(spec + ": line " + std::to_string(lineno + 1) +
                         ": malformed transition row");
    return sft::ToyMachine(std::move(table));
}

std::string status_name(sft::SolveStatus s) {
    switch (s) {
        case sft::SolveStatus::Sat: return "sat";
        case sft::SolveStatus::Unsat: return "unsat";
        default: return "budget";
    }
}

std::string kind_name(sft::StageInfo::Kind k) {
    switch (k) {
        case sft::StageInfo::Kind::Base: return "base";
        case sft::StageInfo::Kind::Transitive: return "transitive";
        default: return "closure";
    }
}

void report_violations(Report& rep, const std::vector<sft::Violation>& vs) {
    rep.line("violations", std::to_string(vs.size()),
             "violations: " + std::to_string(vs.size()));
    int idx = 0;
    for (const auto& v : vs) {
        std::string where = "(" + std::to_string(v.pos.x) + "," +
                            std::to_string(v.pos.y) + ")";
        rep.line("violation." + std::to_string(idx), v.rule + " at " + where,
                 "  " + v.rule + " at " + where);
        ++idx;
    }
}

// ---------------------------------------------------------------------------
// Subcommands.  Each returns the process exit code.

struct SolveArgs {
    std::string tiles_path;
    int width = 1, height = 1;
    bool torus = false;
    std::uint64_t budget = 0;  // 0: SFT_BUDGET or library default
};

sft::TilingProblem build_wang_problem(const SolveArgs& a) {
    std::istringstream in(read_input_file(a.tiles_path));
    sft::TilingProblem p;
    try {
        p.tiles = sft::wang_from_text(in);
    } catch (const std::exception& e) {
        throw InputError(a.tiles_path + ": " + e.what());
    }
    p.region = sft::Region{a.width, a.height,
                           a.torus ? sft::BoundaryMode::Torus : sft::BoundaryMode::Free,
                           {}};
    p.budget = a.budget ? a.budget : default_budget();
    return p;
}

int run_solve(const SolveArgs& a, Report& rep) {
    sft::TilingProblem p = build_wang_problem(a);
    sft::SolveResult r = sft::solve(p);
    rep.line("status", status_name(r.status));
    rep.line("nodes", std::to_string(r.nodes));
    if (r.status == sft::SolveStatus::Sat) {
        for (int y = a.height - 1; y >= 0; --y) {
            std::string row;
            for (int x = 0; x < a.width; ++x) {
                if (x) row += ' ';
                row += std::to_string(r.assignment.at(sft::Cell{x, y}));
            }
            rep.line("row." + std::to_string(y), row, row);
        }
    }
    if (r.status == sft::SolveStatus::Budget) return 3;
    return r.status == sft::SolveStatus::Sat ? 0 : 1;
}

int run_count(const SolveArgs& a, int threads, Report& rep) {
    sft::TilingProblem p = build_wang_problem(a);
    sft::CountResult r = sft::count(p, threads);
    rep.line("status", status_name(r.status));
    rep.line("count", std::to_string(r.count),
             std::to_string(r.count));
    rep.line("nodes", std::to_string(r.nodes));
    if (r.status == sft::SolveStatus::Budget) return 3;
    return r.count > 0 ? 0 : 1;
}

int run_squares(const std::string& input_path, const std::string& alphabet_flag,
                Report& rep) {
    GridInput g = parse_grid_input(read_input_file(input_path), alphabet_flag);
    // Arrow-alphabet inputs are checked through their {0,1} factor image.
    bool arrows = g.alphabet == &sft::arrow_alphabet();
    sft::SquareReport r =
        g.periodic ? sft::f_check(arrows ? sft::h_factor(g.config) : g.config)
                   : sft::f_check(arrows ? sft::h_factor(g.pattern) : g.pattern);
    std::string sizes;
    for (int s : r.sizes) {
        if (!sizes.empty()) sizes += ' ';
        sizes += std::to_string(s);
    }
    rep.line("sizes", sizes.empty() ? "-" : sizes, "square sizes: " + (sizes.empty() ? "none" : sizes));
    rep.line("squares", std::to_string(r.squares.size()),
             "complete squares: " + std::to_string(r.squares.size()));
    rep.line("partials", std::to_string(r.partials.size()),
             "edge partials: " + std::to_string(r.partials.size()));
    report_violations(rep, r.violations);
    rep.line("ok", r.ok() ? "true" : "false",
             r.ok() ? "packing OK" : "packing REJECTED");
    return r.ok() ? 0 : 1;
}

int run_tree(const std::string& tree_path, Report& rep) {
    sft::LabelTree t = parse_tree_file(tree_path);
    rep.line("flavor", t.flavor == sft::TreeFlavor::TwoOmega ? "2omega" : "omega");
    rep.line("nodes", std::to_string(t.nodes.size()));
    rep.line("promises", std::to_string(t.promises.size()));
    bool ill = t.ill_founded();
    rep.line("well_founded", ill ? "false" : "true");
    if (!ill) {
        sft::TreeRankResult r = sft::tree_rank(t);
        rep.line("rank", r.rank.to_string());
    }
    rep.line("order", sft::term_to_text(sft::order_of_tree(t)));
    return 0;
}

int run_order(const std::string& term_path, int derive, Report& rep) {
    std::string text = read_input_file(term_path);
    sft::OrderTerm t;
    try {
        t = sft::term_from_text(text);
    } catch (const std::exception& e) {
        throw InputError(term_path + ": " + e.what());
    }
    if (derive > 0) {
        for (int i = 0; i < derive; ++i) t = sft::hausdorff_derivative(t);
        rep.line("derivative", sft::term_to_text(t), sft::term_to_text(t));
        return 0;
    }
    sft::HausdorffRank r = sft::hausdorff_rank(t);
    if (!r.scattered) {
        rep.line("scattered", "false", "NOT_SCATTERED");
        return 1;
    }
    rep.line("scattered", "true", "");
    rep.line("rank", r.rank.to_string());
    return 0;
}

int run_rank_tcpe(const std::string& tree_path, bool trace, Report& rep) {
    sft::LabelTree t = parse_tree_file(tree_path);
    sft::HierarchyResult r = sft::run_hierarchy(t);
    if (trace) {
        int idx = 0;
        for (const auto& s : r.trace) {
            std::string cls = s.classes < 0 ? "infinite" : std::to_string(s.classes);
            rep.line("stage." + std::to_string(idx),
                     std::to_string(s.stage) + " " + kind_name(s.kind) + " " + cls,
                     "stage " + std::to_string(s.stage) + " [" + kind_name(s.kind) +
                         "] classes=" + cls);
            ++idx;
        }
    }
    if (!r.has_tcpe) {
        rep.line("tcpe", "false", "NO_TCPE");
        if (!r.note.empty()) rep.line("note", r.note);
        return 1;
    }
    rep.line("tcpe", "true", r.rank.to_string());
    rep.line("rank", r.rank.to_string(), "");
    rep.line("parity",
             r.parity == sft::HierarchyResult::Parity::Odd ? "odd" : "even", "");
    return 0;
}

int run_rank_crosscheck(const std::string& tree_path, Report& rep) {
    sft::LabelTree t = parse_tree_file(tree_path);
    sft::CrosscheckReport r = sft::crosscheck_h(t);
    rep.line("ok", r.ok ? "true" : "false",
             r.ok ? "crosscheck OK" : "crosscheck FAILED");
    rep.line("stages", std::to_string(r.stages),
             "compared stages: " + std::to_string(r.stages));
    rep.line("detail", r.detail, r.detail);
    return r.ok ? 0 : 1;
}

int run_drs_geometry(const sft::ZoomParams& zp, int min_level, int max_level,
                     Report& rep) {
    if (min_level < zp.i0 || max_level < min_level)
        throw InputError("geometry levels must satisfy i0 <= min <= max");
    for (int i = min_level; i <= max_level; ++i) {
        sft::Geometry g = sft::geometry(zp, i);
        std::string lv = std::to_string(i);
        rep.line("level." + lv + ".L", std::to_string(g.L),
                 "level " + lv + ": side L=" + std::to_string(g.L) +
                     " zone R=" + std::to_string(g.R) +
                     " children=" + std::to_string(g.children) +
                     " tape_words=" + std::to_string(g.tape_words));
        rep.line("level." + lv + ".R", std::to_string(g.R), "");
        rep.line("level." + lv + ".children", std::to_string(g.children), "");
        rep.line("level." + lv + ".tape_words", std::to_string(g.tape_words), "");
        rep.line("level." + lv + ".color_bits",
                 std::to_string(sft::basic_color_bits(zp, i)), "");
        for (size_t r = g.wire_map.size(); r-- > 0;)
            rep.line("level." + lv + ".wire." + std::to_string(r), g.wire_map[r],
                     "  " + g.wire_map[r]);
    }
    return 0;
}

int run_drs_assemble(const sft::ZoomParams& zp, int level, std::uint64_t seed,
                     Report& rep) {
    sft::ColorTuple top = sft::sample_top(zp, level, seed);
    sft::MacroTile tile;
    try {
        tile = sft::assemble(zp, level, top);
    } catch (const sft::AssemblyFailed& e) {
        rep.line("assembled", "false", std::string("assembly FAILED: ") + e.what());
        rep.line("reason", e.what(), "");
        return 1;
    }
    rep.line("assembled", "true",
             "assembled level-" + std::to_string(level) + " macrotile, " +
                 std::to_string(tile.children.size()) + " children");
    rep.line("children", std::to_string(tile.children.size()), "");
    std::vector<std::string> issues = sft::check_macrotile(zp, tile);
    rep.line("issues", std::to_string(issues.size()),
             "consistency issues: " + std::to_string(issues.size()));
    for (size_t i = 0; i < issues.size(); ++i)
        rep.line("issue." + std::to_string(i), issues[i], "  " + issues[i]);
    auto back = sft::reparse(zp, tile);
    bool round_trip = back.has_value() && *back == top;
    rep.line("round_trip", round_trip ? "true" : "false",
             round_trip ? "re-parse recovered the top colors"
                        : "re-parse FAILED to recover the top colors");
    return issues.empty() && round_trip ? 0 : 1;
}

int run_drs_verify(const sft::ZoomParams& zp, int levels, int samples,
                   std::uint64_t seed, Report& rep) {
    if (levels < 1) throw InputError("--levels must be >= 1");
    bool all_ok = true;
    for (int i = zp.i0 + 1; i <= zp.i0 + levels; ++i) {
        sft::VerifyReport r = sft::verify_simulation(zp, i, samples, seed);
        std::string lv = std::to_string(i);
        rep.line("level." + lv + ".round_trips",
                 std::to_string(r.round_trips) + "/" + std::to_string(r.samples),
                 "level " + lv + ": " + std::to_string(r.round_trips) + "/" +
                     std::to_string(r.samples) + " round trips, injective=" +
                     (r.injective ? "true" : "false") + ", unique_division=" +
                     (r.unique_division ? "true" : "false") + ", failures=" +
                     std::to_string(r.failures.size()));
        rep.line("level." + lv + ".injective", r.injective ? "true" : "false", "");
        rep.line("level." + lv + ".unique_division",
                 r.unique_division ? "true" : "false", "");
        rep.line("level." + lv + ".failures", std::to_string(r.failures.size()), "");
        for (size_t k = 0; k < r.failures.size() && k < 5; ++k)
            rep.line("level." + lv + ".failure." + std::to_string(k), r.failures[k],
                     "  " + r.failures[k]);
        all_ok = all_ok && r.ok();
    }
    rep.line("ok", all_ok ? "true" : "false",
             all_ok ? "verification OK" : "verification FAILED");
    return all_ok ? 0 : 1;
}

int run_render(const std::string& input_path, const std::string& alphabet_flag,
               const std::string& out_path, int cell_px, bool outlines, int grid,
               Report& rep) {
    GridInput g = parse_grid_input(read_input_file(input_path), alphabet_flag);
    sft::RenderSpec spec = sft::RenderSpec::for_alphabet(*g.alphabet);
    spec.cell_px = cell_px;
    spec.square_outlines = outlines;
    spec.macro_grid = grid;
    std::string svg = g.periodic ? sft::render_svg(g.config, spec)
                                 : sft::render_svg(g.pattern, spec);
    if (out_path.empty()) {
        std::cout << svg;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw InputError("cannot open output file '" + out_path + "'");
        f << svg;
        rep.line("out", out_path, "wrote " + out_path);
        rep.line("bytes", std::to_string(svg.size()),
                 std::to_string(svg.size()) + " bytes");
        rep.flush();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SFT laboratory: tilings, square packings, tree ranks, and "
                 "self-simulating tilesets"};
    app.require_subcommand(1);

    bool porcelain = false;
    int threads = 1;
    app.add_flag("--porcelain", porcelain, "line-oriented key=value output");
    app.add_option("--threads", threads, "worker threads where supported")
        ->check(CLI::PositiveNumber);
    app.add_option("--manifest", g_manifest.out_path,
                   "write the run manifest to this file instead of stderr");

    SolveArgs sa;
    std::uint64_t seed = 1;
    std::string input_path, tree_path, term_path, out_path;
    std::string alphabet_flag = "binary", machine_spec = "looping";
    int derive = 0, level = 3, min_level = 2, max_level = 4;
    int levels = 1, samples = 25, cell_px = 16, grid = 0;
    bool trace = false, outlines = false;

    auto add_region = [&](CLI::App* cmd) {
        cmd->add_option("--tiles", sa.tiles_path, "Wang tileset file")->required();
        cmd->add_option("--width", sa.width, "region width")->required();
        cmd->add_option("--height", sa.height, "region height")->required();
        cmd->add_flag("--torus", sa.torus, "periodic boundary");
        cmd->add_option("--budget", sa.budget, "node budget (default SFT_BUDGET)");
    };

    CLI::App* solve = app.add_subcommand("solve", "find one tiling of a region");
    add_region(solve);
    CLI::App* count = app.add_subcommand("count", "count all tilings of a region");
    add_region(count);

    CLI::App* squares = app.add_subcommand("squares", "check the square packing rules");
    squares->add_option("--input", input_path, "pattern or periodic file")->required();
    squares->add_option("--alphabet", alphabet_flag, "alphabet for periodic input");

    CLI::App* tree = app.add_subcommand("tree", "inspect a label tree");
    tree->add_option("--tree", tree_path, "tree file")->required();

    CLI::App* order = app.add_subcommand("order", "scattered-order rank calculus");
    order->add_option("--term", term_path, "order term file (s-expression)")->required();
    order->add_option("--derive", derive, "print the k-th condensation derivative");

    CLI::App* rank = app.add_subcommand("rank", "hierarchy ranks");
    rank->require_subcommand(1);
    CLI::App* tcpe = rank->add_subcommand("tcpe", "TCPE rank of a tree's shift");
    tcpe->add_option("--tree", tree_path, "tree file")->required();
    tcpe->add_flag("--trace", trace, "print the per-stage class counts");
    CLI::App* cross = rank->add_subcommand(
        "crosscheck", "compare hierarchy stages with order derivatives");
    cross->add_option("--tree", tree_path, "tree file")->required();

    CLI::App* drs = app.add_subcommand("drs", "self-simulating tileset diagnostics");
    drs->require_subcommand(1);
    CLI::App* geo = drs->add_subcommand("geometry", "level sides, zones, wire maps");
    geo->add_option("--min-level", min_level, "first level (default 2)");
    geo->add_option("--max-level", max_level, "last level (default 4)");
    CLI::App* asm_ = drs->add_subcommand("assemble", "assemble and re-parse one macrotile");
    asm_->add_option("--level", level, "macrotile level (default 3)");
    asm_->add_option("--seed", seed, "top-color sample seed");
    asm_->add_option("--machine", machine_spec, "looping | halt:<k> | file");
    CLI::App* verify = drs->add_subcommand("verify", "one-level simulation verification");
    verify->add_option("--machine", machine_spec, "looping | halt:<k> | file")->required();
    verify->add_option("--levels", levels, "verify levels i0+1 .. i0+k")->required();
    verify->add_option("--samples", samples, "sampled top colors per level");
    verify->add_option("--seed", seed, "sample seed");

    CLI::App* render = app.add_subcommand("render", "render a pattern to SVG");
    render->add_option("--input", input_path, "pattern or periodic file")->required();
    render->add_option("--alphabet", alphabet_flag, "alphabet for periodic input");
    render->add_option("--out", out_path, "output file (default stdout)");
    render->add_option("--cell-px", cell_px, "cell size in pixels");
    render->add_flag("--square-outlines", outlines, "outline detected squares");
    render->add_option("--grid", grid, "macrotile grid pitch in cells");

    for (int i = 0; i < argc; ++i) {
        if (i) g_manifest.command += ' ';
        g_manifest.command += argv[i];
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    g_manifest.seed = seed;
    Report rep;
    rep.porcelain = porcelain;
    int rc = 0;
    bool flushed = false;
    try {
        if (*solve) {
            rc = run_solve(sa, rep);
        } else if (*count) {
            rc = run_count(sa, threads, rep);
        } else if (*squares) {
            rc = run_squares(input_path, alphabet_flag, rep);
        } else if (*tree) {
            rc = run_tree(tree_path, rep);
        } else if (*order) {
            rc = run_order(term_path, derive, rep);
        } else if (*rank) {
            rc = *tcpe ? run_rank_tcpe(tree_path, trace, rep)
                       : run_rank_crosscheck(tree_path, rep);
        } else if (*drs) {
            sft::ZoomParams zp;
            zp.machine = parse_machine_spec(machine_spec);
            if (*geo)
                rc = run_drs_geometry(zp, min_level, max_level, rep);
            else if (*asm_)
                rc = run_drs_assemble(zp, level, seed, rep);
            else
                rc = run_drs_verify(zp, levels, samples, seed, rep);
        } else if (*render) {
            rc = run_render(input_path, alphabet_flag, out_path, cell_px, outlines,
                            grid, rep);
            flushed = true;  // render manages its own stdout (raw SVG)
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
        flushed = true;
    } catch (const sft::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        rc = 3;
        flushed = true;
    } catch (const sft::PreconditionFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
        flushed = true;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
        flushed = true;
    }
    if (!flushed) rep.flush();
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    g_manifest.write(wall_ms);
    return rc;
}
