#ifndef SFT_SELFSIM_HPP
#define SFT_SELFSIM_HPP

// A miniature self-simulating tileset framework at toy parameters: macrocolor
// bit layouts, the per-tile consistency checker, responsibility-zone
// geometry, constructive macrotile assembly, trap zones, and one-level
// simulation verification.
//
// A level-(i+1) macrotile is an N_i x N_i array of level-i tiles.  Each tile
// shows four colors; a color carries a location part (position of the shared
// boundary inside the parent), a two-bit wire part, and a 32-bit computation
// word.  The parent's own four colors, prefixed by a parameter header
// 0^e 1 0^(i+1) 1, are packed into 32-bit words laid onto the tape cells of
// the parent's computation zone; the remaining zone cells hold the trace of
// a pluggable step-bounded machine.  A halting machine eventually leaves the
// zone unfillable, so assembly fails; a looping machine lets every level
// assemble, and the parent colors can be recovered from the zone (the
// simulation map is injective and macrotile boundaries re-parse uniquely).
//
// The size-checking extension adds knowledge fields (square sizes the tile
// is responsible for, partial corners and sides, neighbor / diagonal /
// parent knowledge, corner messages) with a frozen per-level bit layout, and
// a trap zone: a 2x2 child region with outward-only information flow where
// any previously admissible block may appear, its duties taken over by the
// twelve surrounding tiles via information-circle fields.

#include "sft/errors.hpp"
#include "sft/grid.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sft {

// ---------------------------------------------------------------------------
// Step-bounded machines

struct MachineStep {
    int state = 0;
    int write = 0;
    int move = 1;  // -1 or +1
};

// A tiny transition-table machine on a binary two-way tape, started on empty
// input in state 0.  A missing transition halts.
class ToyMachine {
public:
    using Row = std::array<std::optional<MachineStep>, 2>;
    ToyMachine() : ToyMachine(std::vector<Row>{}) {}
    explicit ToyMachine(std::vector<Row> table) : table_(std::move(table)) {}

    struct RunResult {
        bool halted = false;
        long long steps = 0;  // steps completed (the halt step if halted)
    };
    struct TracePoint {
        int state = 0;
        long long head = 0;
    };
    RunResult run(long long max_steps) const;
    // State/head trace of the first max_steps steps; shorter if it halts.
    std::vector<TracePoint> trace(long long max_steps) const;

    static ToyMachine looping();            // one state, runs forever
    static ToyMachine halting_at(int k);    // halts after exactly k steps

private:
    std::vector<Row> table_;
};

// ---------------------------------------------------------------------------
// Zoom parameters and geometry

struct ZoomParams {
    int i0 = 2;                 // pixel level
    int e = 1;                  // checker parameter index on the tape (e < i0)
    std::function<long long(int)> zoom = [](int i) { return 1LL << i; };
    ToyMachine machine = ToyMachine::looping();

    // Validated zoom value; throws PreconditionFailed unless N(i) >= 4.
    long long N(int i) const;
};

long long level_side(const ZoomParams& zp, int i);           // L_i
long long responsibility_side(const ZoomParams& zp, int i);  // R_i

// Payload roles inside a level-(i+1) parent grid of N_i x N_i children.
enum class CellRole { Blank, TapeWord, Computation, Trap };

struct Geometry {
    int level = 0;          // i
    long long L = 1;        // L_i, pixel side of a level-i macrotile
    long long R = 1;        // R_i, pixel side of its responsibility zone
    long long children = 0; // N_{i-1} for i > i0; 0 at the pixel level
    Rect computation_zone;  // in child coordinates (empty at pixel level)
    Rect trap_zone;
    int tape_words = 0;     // zone cells holding the parameter tape
    std::vector<std::string> wire_map;  // rows bottom-up: T/C/X/. per cell

    CellRole role(Cell child) const;
};

Geometry geometry(const ZoomParams& zp, int i);

// ---------------------------------------------------------------------------
// Macrocolors

struct CornerInfo {
    Cell pos;             // pixel location relative to the tile
    int orientation = 0;  // quadrant the square lies in: 0 NE, 1 NW, 2 SE, 3 SW
    friend bool operator==(const CornerInfo&, const CornerInfo&) = default;
};

struct SideInfo {
    long long coord = 0;  // single pixel coordinate of the through-going side
    bool vertical = false;
    friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

struct SelfKnowledge {
    std::vector<int> sizes;          // up to 2 square sizes <= L_i
    std::vector<Cell> justifications;  // aligned with sizes (levels > i0)
    std::vector<CornerInfo> corners;   // up to 4 partial corners
    std::vector<SideInfo> sides;       // up to 2 partial sides
    friend bool operator==(const SelfKnowledge&, const SelfKnowledge&) = default;
};

struct ParentKnowledge {
    std::vector<int> sizes;            // up to 2, adjacent when two
    std::vector<Cell> justifications;  // aligned with sizes
    std::vector<CornerInfo> corners;
    std::vector<SideInfo> sides;
    friend bool operator==(const ParentKnowledge&, const ParentKnowledge&) = default;
};

struct CornerMessage {
    Cell pos;           // corner pixel location relative to the parent
    int direction = 0;  // 0 E, 1 N, 2 W, 3 S
    friend bool operator==(const CornerMessage&, const CornerMessage&) = default;
};

struct SizedFields {
    SelfKnowledge self;
    SelfKnowledge neighbor;                    // received from the facing tile
    std::array<SelfKnowledge, 2> diag_out;     // told to the neighbor
    std::array<SelfKnowledge, 2> diag_in;      // received about diagonals
    ParentKnowledge parent;
    std::vector<CornerMessage> msg_out;        // up to 8 (two arms per corner)
    std::vector<CornerMessage> msg_in;         // up to 8
    std::vector<SelfKnowledge> trap_circle;    // 12 entries when in use
    friend bool operator==(const SizedFields&, const SizedFields&) = default;
};

struct MacroColor {
    int level = 0;
    long long loc_x = 0, loc_y = 0;  // boundary location inside the parent
    int wire = 0;                    // 2 bits
    std::uint32_t payload = 0;       // computation word
    std::optional<SizedFields> sized;
    friend bool operator==(const MacroColor&, const MacroColor&) = default;
};

// Bit codec with a fixed per-level field layout.  Basic length is
// s_i = 2 log N_i + 2 + 32; the size-checking extension appends fields of
// widths derived from L_i.  Throws PreconditionFailed on out-of-range
// fields or malformed bitstrings.
std::string encode_macrocolor(const ZoomParams& zp, const MacroColor& c);
MacroColor decode_macrocolor(const ZoomParams& zp, int level, const std::string& bits,
                             bool sized = false);
long long basic_color_bits(const ZoomParams& zp, int level);  // s_i
long long sized_color_bits(const ZoomParams& zp, int level);
// One line per field: "level field offset width".
std::string layout_manifest(const ZoomParams& zp, int min_level, int max_level);

// ---------------------------------------------------------------------------
// The consistency checker

struct CheckResult {
    bool running = false;
    long long steps = 0;      // machine steps completed (threshold if running)
    std::string reason;       // halt reason tag
};

// The host algorithm on a parameter tape "0^e 1 0^i 1 <4 colors>": parsing,
// four-color consistency, role checks, header sync against the parent tape
// words, then the pluggable machine for N_{i-1}/2 steps.
CheckResult check_basic(const ZoomParams& zp, const std::string& tape);

// The size-checking consistency list over decoded colors (order west, south,
// east, north).  trap_side in [0,4): that side's fields are unrestricted
// (the tile neighbors the trap zone); -1: plain mode.
CheckResult check_sized(const ZoomParams& zp, int level,
                        const std::array<MacroColor, 4>& colors, int trap_side = -1);

// ---------------------------------------------------------------------------
// Macrotiles

struct ColorTuple {
    MacroColor west, south, east, north;
    friend bool operator==(const ColorTuple&, const ColorTuple&) = default;
};

struct MacroTile {
    int level = 0;       // i: the level this tile simulates
    long long side = 0;  // N_{i-1} children per side
    std::vector<ColorTuple> children;  // row-major, row 0 first
    ColorTuple top;
    bool has_trap = false;  // trap zone populated with a foreign block

    const ColorTuple& child(Cell c) const {
        return children.at(static_cast<size_t>(c.y * side + c.x));
    }
    ColorTuple& child(Cell c) {
        return children.at(static_cast<size_t>(c.y * side + c.x));
    }
};

struct AssemblyFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The parameter tape of a level-i macrotile with the given top colors.
std::string parameter_tape(const ZoomParams& zp, int level, const ColorTuple& top);
// A random internally consistent level-i color tuple.
ColorTuple sample_top(const ZoomParams& zp, int level, std::uint64_t seed);

// Deterministic assembly of the full child array of a level-i macrotile.
// Throws AssemblyFailed when the machine halts before the computation zone
// is filled (every level with a positive budget, for a halting machine).
MacroTile assemble(const ZoomParams& zp, int level, const ColorTuple& top);
// Same, with a previously admissible 2x2 block installed in the trap zone.
MacroTile assemble(const ZoomParams& zp, int level, const ColorTuple& top,
                   const std::array<ColorTuple, 4>& trap_block);

// All internal consistency problems of an assembled macrotile: per-child
// checker verdicts, shared-edge equality, zone payload expectations, wire
// display, trap relaxations.  Empty result = valid.
std::vector<std::string> check_macrotile(const ZoomParams& zp, const MacroTile& t);

// Recovers the top colors from the child array alone (unique division:
// location parts must form the child grid, then the tape words re-parse).
std::optional<ColorTuple> reparse(const ZoomParams& zp, const MacroTile& t);

struct VerifyReport {
    int samples = 0;
    int round_trips = 0;       // assemble-then-reparse successes
    bool injective = true;     // distinct tops gave distinct child arrays
    bool unique_division = true;
    std::vector<std::string> failures;
    bool ok() const { return round_trips == samples && injective && unique_division && failures.empty(); }
};

VerifyReport verify_simulation(const ZoomParams& zp, int level, int samples,
                               std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Responsibility and accuracy

struct SquareAt {
    Cell corner;  // lower-left pixel of the square's outer box
    int n = 0;    // square size (outer box side n + 2)
};

// Definition-level responsibility: some level j in [i0, i] has two tiles,
// identical or adjacent, fully inside the responsibility zone, each holding
// a corner of the square.  tile_origin is the lower-left pixel of the
// level-i macrotile, aligned to the global L_i grid.
bool responsible(const ZoomParams& zp, int i, Cell tile_origin, const SquareAt& s);
// The three-case characterization (child recursion / adjacent level-(i-1)
// pair / two children of this tile); equal to `responsible` everywhere.
bool responsible_cases(const ZoomParams& zp, int i, Cell tile_origin, const SquareAt& s);

// Ground-truth self-knowledge of a level-i macrotile at tile_origin over a
// doubly periodic {0,1} configuration: responsible sizes with least-child
// justifications, and partial corners/sides of larger squares crossing the
// central L_i x L_i region.
SelfKnowledge ground_truth(const ZoomParams& zp, int i, Cell tile_origin,
                           const PeriodicConfig& y);

struct AccuracyJudgment {
    enum class Verdict { SelfAccurate, Accurate, Inaccurate };
    Verdict verdict = Verdict::SelfAccurate;
    std::string reason;  // failing field when inaccurate
};

// Judges a claimed self-knowledge against the ground truth at a location.
AccuracyJudgment judge_accuracy(const ZoomParams& zp, int i, Cell tile_origin,
                                const PeriodicConfig& y, const SelfKnowledge& claim);

// One-level constructive assembly of accurate sized children for a level-i
// macrotile over the configuration: every child receives its ground-truth
// self/neighbor/diagonal knowledge, a copy of the parent knowledge, and the
// corner messages reality requires.  Throws AssemblyFailed (naming the
// field) when the claimed top self-knowledge is not accurate.
std::vector<SizedFields> assemble_sized(const ZoomParams& zp, int i, Cell tile_origin,
                                        const PeriodicConfig& y,
                                        const SelfKnowledge& top_claim);

}  // namespace sft

#endif  // SFT_SELFSIM_HPP
