#ifndef SFT_SQUARES_HPP
#define SFT_SQUARES_HPP

// Square-packing machinery over a two-symbol alphabet {A,B}:
//
//   * n-squares: an n x n block of B surrounded by a one-cell border of A
//     (total side n+2);
//   * the packing rule family: (1) every 2x2 block of B lies in the interior
//     of an n-square, (2) every A belongs to the border of a unique square
//     (degenerate/infinite squares possible; squares may touch, but borders
//     may not be shared), (3) coexisting square sizes differ by at most 1;
//   * an 18-symbol arrow alphabet whose nested counterclockwise square
//     outlines realize rules (1)-(2) as a 2x2-local SFT, with the factor map
//     sending white symbols to 1 and gray symbols to 0;
//   * a constructive block-extension procedure producing rectangular blocks
//     of completed squares with glue-friendly boundaries;
//   * independence witnesses: independent placements of two patterns that
//     always complete.

#include "sft/errors.hpp"
#include "sft/grid.hpp"
#include "sft/solver.hpp"

#include <set>
#include <utility>

namespace sft {

// A finite square type: pure n (lo == hi) or mixed (n, n+1).
struct SquareTypeT {
    int lo = 0;
    int hi = 0;
    bool mixed() const { return hi != lo; }
    bool allows(int size) const { return size == lo || size == hi; }
    static SquareTypeT pure(int n) { return SquareTypeT{n, n}; }
    static SquareTypeT pair(int n) { return SquareTypeT{n, n + 1}; }
    friend bool operator==(const SquareTypeT&, const SquareTypeT&) = default;
};

// ---------------------------------------------------------------------------
// Squares and the packing checker

// The (n+2)x(n+2) n-square pattern anchored at the origin (ring = a_sym,
// interior = b_sym).
Pattern make_square(int n, int a_sym = 0, int b_sym = 1);

// Macro-composition: same layout, but each cell is a copy of the pattern A
// or B (both must be squares of equal side).  Total side (n+2)*side(A).
Pattern compose_square(int n, const Pattern& A, const Pattern& B);

struct SquareInfo {
    Cell pos;     // lower-left corner of the outer (ring) footprint
    int size = 0; // interior side n
    Rect ring_box() const { return Rect{pos.x, pos.y, size + 2, size + 2}; }
};

struct SquareReport {
    std::set<int> sizes;                // complete square sizes observed
    std::vector<SquareInfo> squares;    // complete squares
    std::vector<SquareInfo> partials;   // components cut off by the window edge (size = -1)
    std::vector<Violation> violations;  // tagged "rule1" / "rule2" / "rule3"
    bool ok() const { return violations.empty(); }
};

// Checks a rectangular window (symbols a_sym/b_sym) against the packing
// rules.  Components touching the window edge are reported as partials, not
// violations; only locally impossible geometry is a violation.
SquareReport f_check(const Pattern& window, int a_sym = 0, int b_sym = 1);
// Periodic wrapper: scans a 3x3-period window so every square of the orbit
// appears completely.
SquareReport f_check(const PeriodicConfig& x, int a_sym = 0, int b_sym = 1);

// ---------------------------------------------------------------------------
// Truncated packing rules for the constraint solver
//
// A sound truncation of the packing rule family as finite window patterns:
// isolated A cells (an A all four of whose neighbors are B) and complete
// bordered non-square fat rectangles (min side >= 2) up to diameter d.  The
// dedicated checker runs the full packing checker.
class PackingRules : public RuleGenerator {
public:
    PackingRules(int a_sym = 0, int b_sym = 1) : a_(a_sym), b_(b_sym) {}
    std::string name() const override { return "square-packing"; }
    std::vector<Pattern> enumerate(int d) const override;
    std::vector<Violation> check(const PeriodicConfig& x, int d) const override;

private:
    int a_, b_;
};

// ---------------------------------------------------------------------------
// Arrow alphabet
//
// Symbols (ids in this order):
//   1 o  wl wr wu wd wtl wtr wbl wbr  gl gr gu gd gtl gtr gbl gbr
// where w/g = white/gray, l/r/u/d = left/right/up/down straight arrows and
// tl/tr/bl/br = corner arrows; corner arrows point counterclockwise, so a
// square outline reads: top edge leftward, left edge downward, bottom edge
// rightward, right edge upward.
const Alphabet& arrow_alphabet();

enum ArrowSym : int {
    kOne = 0, kDot,
    kWL, kWR, kWU, kWD, kWTL, kWTR, kWBL, kWBR,
    kGL, kGR, kGU, kGD, kGTL, kGTR, kGBL, kGBR,
};

// Allowed-neighbor masks: arrow_allowed_east()[a] has bit b set iff b may sit
// directly east of a; similarly north.
const std::vector<std::uint64_t>& arrow_allowed_east();
const std::vector<std::uint64_t>& arrow_allowed_north();

// The full set of forbidden 2x2 blocks over the arrow alphabet (every block
// violating an adjacency law, plus the 2x2 block of 1s).
ForbiddenSet y1_rules();

// Ready-made solver problem over the arrow alphabet for a region.
TilingProblem y1_problem(Region region);

// A hand-checked 10x12 sample block exercising every symbol: nested square
// outlines of both colors, a 0-square, two 1-squares, touching squares and
// degenerate infinite edges.  Cell (0,0) is the lower-left corner.
Pattern y1_sample_block();

// Factor map: white symbols (including "1" and "o") -> 1, gray -> 0.
Pattern h_factor(const Pattern& p);
PeriodicConfig h_factor(const PeriodicConfig& x);

// ---------------------------------------------------------------------------
// Constructive extension

// The safety margin used by extend_block: with squares of side <= s+2 and
// gaps of 0 or 1, any run of length >= (s+4)^2 can be packed flush, so this
// margin leaves room for the worst case on every side.
int extension_margin(SquareTypeT t);

// Extends v (empty, or a parseable seed of complete/partial squares) to a
// pattern on R containing only completed squares of sizes allowed by t, with
// t realized, flush boundaries, and no two adjacent 1s nor corner 1s on the
// boundary of R.  Throws TypeInconsistent when v's squares contradict t, and
// CannotExtend when the seed cannot be packed to R's dimensions.
Pattern extend_block(const Pattern& v, SquareTypeT t, Rect R);

// True iff for every choice among 2^m placements of w/v at m well-separated
// plots, the placement extends to a full legal block.  Throws
// PreconditionFailed when t is not a common type of w and v, and
// ResourceLimit when m > 4.
bool independence_witness(const Pattern& w, const Pattern& v, SquareTypeT t, int m);

}  // namespace sft

#endif  // SFT_SQUARES_HPP
