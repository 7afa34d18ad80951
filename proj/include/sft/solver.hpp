#ifndef SFT_SOLVER_HPP
#define SFT_SOLVER_HPP

// Finite-region constraint solver for Wang tilesets and forbidden-pattern
// problems: existence, counting, enumeration, and completion of partial
// assignments.
//
// Search is backtracking over cells with constraint propagation
// (AC-3 on tile adjacency in Wang mode, windowed forward pruning in pattern
// mode); variable order is most-constrained-cell, tie-broken
// lexicographically by (y,x); values are tried in ascending order.  Results
// are deterministic in single-threaded mode; parallel mode returns the same
// status and count.

#include "sft/grid.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sft {

struct WangTile {
    int n = 0, e = 0, s = 0, w = 0;
    friend bool operator==(const WangTile&, const WangTile&) = default;
};

enum class BoundaryMode { Free, Torus, FixedBorder };

struct Region {
    int w = 1, h = 1;
    BoundaryMode mode = BoundaryMode::Free;
    // FixedBorder only: symbols/tiles for the one-cell ring around the
    // region (cells with x in [-1,w], y in [-1,h] on the ring).
    std::map<Cell, int> border;
};

// Either a Wang tileset (tiles nonempty) or a symbol problem (alphabet_size
// plus forbidden window patterns).  `final_check`, when set, is evaluated on
// every total assignment; returning false rejects the leaf (used for
// conditional rules that are not expressible as finite pattern lists).
struct TilingProblem {
    std::vector<WangTile> tiles;
    int alphabet_size = 0;
    std::vector<Pattern> forbidden;
    // Optional nearest-neighbor laws for symbol problems: allow_e[a] has bit
    // b set iff symbol b may sit directly east of a; likewise allow_n for
    // north.  Either both empty or both of length alphabet_size.  Combined
    // conjunctively with `forbidden`.
    std::vector<std::uint64_t> allow_e, allow_n;
    Region region;
    std::map<Cell, int> pins;
    std::function<bool(const Pattern&)> final_check;
    std::uint64_t budget = 50'000'000;   // node budget; exceeding it is not UNSAT

    bool wang() const { return !tiles.empty(); }
    int domain_size() const { return wang() ? static_cast<int>(tiles.size()) : alphabet_size; }
};

enum class SolveStatus { Sat, Unsat, Budget };

struct SolveResult {
    SolveStatus status = SolveStatus::Unsat;
    Pattern assignment;        // total assignment over the region when Sat
    std::uint64_t nodes = 0;
};

struct CountResult {
    SolveStatus status = SolveStatus::Unsat;  // Sat iff count > 0 (when not Budget)
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
};

SolveResult solve(const TilingProblem& p);
// Exact number of total consistent assignments.
CountResult count(const TilingProblem& p, int threads = 1);
// First (in search order) `limit` solutions.
std::vector<Pattern> enumerate_solutions(const TilingProblem& p, std::uint64_t limit);
// Extension of `partial` (treated as additional pins), or UNSAT.
SolveResult complete(const TilingProblem& p, const std::map<Cell, int>& partial);

// Tileset text format: "wang <k>" then k lines "n e s w".
std::string to_text(const std::vector<WangTile>& tiles);
std::vector<WangTile> wang_from_text(std::istream& in);

}  // namespace sft

#endif  // SFT_SOLVER_HPP
