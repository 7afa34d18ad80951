#ifndef SFT_GRID_HPP
#define SFT_GRID_HPP

// Foundational pattern/configuration algebra for two-dimensional symbolic
// dynamics at desk scale: finite alphabets, patterns on arbitrary finite
// supports, doubly-periodic configurations, pattern occurrence, coexistence,
// and forbidden-set evaluation.
//
// Coordinates are (column x, row y) with north = +y.  Pattern equality is
// support-and-cells equality; translation is explicit (shifted()).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sft {

// ---------------------------------------------------------------------------
// Alphabet

struct Symbol {
    int id = 0;               // contiguous from 0 within one alphabet
    std::string name;         // short printable label
};

class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::string name, std::vector<std::string> symbol_names);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const Symbol& symbol(int id) const { return symbols_.at(static_cast<size_t>(id)); }
    const std::string& symbol_name(int id) const { return symbol(id).name; }
    // Throws std::out_of_range for unknown names.
    int id_of(const std::string& symbol_name) const;
    bool has(const std::string& symbol_name) const;

    static Alphabet binary();   // {"0","1"}

private:
    std::string name_;
    std::vector<Symbol> symbols_;
    std::map<std::string, int> by_name_;
};

// ---------------------------------------------------------------------------
// Cells and patterns

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    // Row-major order (y first) so iteration is scanline order, bottom row first.
    friend auto operator<=>(const Cell& a, const Cell& b) {
        if (a.y != b.y) return a.y <=> b.y;
        return a.x <=> b.x;
    }
};

struct Rect {
    int x0 = 0, y0 = 0;   // inclusive lower-left corner
    int w = 0, h = 0;
    bool contains(Cell c) const {
        return c.x >= x0 && c.x < x0 + w && c.y >= y0 && c.y < y0 + h;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

// A finite symbol assignment on an arbitrary finite support.
class Pattern {
public:
    Pattern() = default;

    void set(Cell c, int symbol_id) { cells_[c] = symbol_id; }
    void erase(Cell c) { cells_.erase(c); }
    bool has(Cell c) const { return cells_.count(c) != 0; }
    // Throws std::out_of_range if the cell is not in the support.
    int at(Cell c) const;
    std::optional<int> get(Cell c) const;

    bool empty() const { return cells_.empty(); }
    int size() const { return static_cast<int>(cells_.size()); }
    const std::map<Cell, int>& cells() const { return cells_; }

    // Tight bounding box of the support; {0,0,0,0} when empty.
    Rect bbox() const;
    // Larger of the bounding-box width/height; 0 when empty.
    int diameter() const;

    Pattern shifted(int dx, int dy) const;
    // True iff this pattern, shifted by (dx,dy), agrees with `other` on its
    // whole (shifted) support.
    bool matches_at(const Pattern& other, int dx, int dy) const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern& a, const Pattern& b) {
        return a.cells_ <=> b.cells_;
    }

    // Rectangular pattern from row-major symbol ids (row y=0 first).
    static Pattern rectangle(int w, int h, const std::vector<int>& row_major);
    static Pattern uniform(int w, int h, int symbol_id);

private:
    std::map<Cell, int> cells_;
};

// A doubly-periodic configuration x(i,j) = dom(i mod w, j mod h).
class PeriodicConfig {
public:
    PeriodicConfig() = default;
    PeriodicConfig(int w, int h, std::vector<int> row_major_cells);

    int width() const { return w_; }
    int height() const { return h_; }
    int at(int x, int y) const;                 // arbitrary integer coordinates
    int at(Cell c) const { return at(c.x, c.y); }
    void set(int x, int y, int symbol_id);

    // The w x h fundamental-domain pattern anchored at the origin.
    Pattern fundamental_domain() const;
    // Any rectangular window as a pattern.
    Pattern window(const Rect& r) const;

    friend bool operator==(const PeriodicConfig&, const PeriodicConfig&) = default;

    static PeriodicConfig uniform(int w, int h, int symbol_id);

private:
    int w_ = 1, h_ = 1;
    std::vector<int> cells_;   // row-major, y*w + x
};

// ---------------------------------------------------------------------------
// Occurrence

// True iff some translate of w matches x.  Scanning one period rectangle
// (expanded by w's extents) is sufficient and required.
bool appears_in(const Pattern& w, const PeriodicConfig& x);
// True iff both w and v appear in x.
bool coexist(const Pattern& w, const Pattern& v, const PeriodicConfig& x);

// ---------------------------------------------------------------------------
// Forbidden sets

struct Violation {
    Pattern pattern;      // the forbidden pattern (or a witness excerpt)
    Cell pos;             // translation at which it occurs / window anchor
    std::string rule;     // short tag naming the violated rule
};

// A parameterized family of forbidden patterns.  Families may either
// enumerate their members up to a diameter bound, or (for conditional rules
// that have no finite pattern list at fixed diameter) implement a dedicated
// window checker.
class RuleGenerator {
public:
    virtual ~RuleGenerator() = default;
    virtual std::string name() const = 0;
    // Finite, deterministic enumeration of forbidden patterns of diameter <= d.
    // Throws BoundTooSmall if the family cannot be truncated at d.
    virtual std::vector<Pattern> enumerate(int d) const = 0;
    // Optional dedicated checker evaluated on one expanded period window.
    // Returns violations; the default scans the enumerated patterns.
    virtual std::vector<Violation> check(const PeriodicConfig& x, int d) const;
};

struct BoundTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ForbiddenSet {
public:
    ForbiddenSet() = default;

    void add(Pattern p) { explicit_.push_back(std::move(p)); }
    void add_generator(std::shared_ptr<RuleGenerator> g) { generators_.push_back(std::move(g)); }

    const std::vector<Pattern>& explicit_patterns() const { return explicit_; }
    const std::vector<std::shared_ptr<RuleGenerator>>& generators() const { return generators_; }

    // Explicit patterns of diameter <= d plus all generator enumerations.
    std::vector<Pattern> enumerate(int d) const;
    int max_explicit_diameter() const;

private:
    std::vector<Pattern> explicit_;
    std::vector<std::shared_ptr<RuleGenerator>> generators_;
};

// All occurrences of any diameter-<=d pattern of F inside one expanded period
// window of x.  Empty result means x satisfies F restricted to diameter d.
// Requires d >= diameter of every explicit pattern of F.
std::vector<Violation> violates(const ForbiddenSet& F, const PeriodicConfig& x, int d);

// ---------------------------------------------------------------------------
// Text formats
//
//   pattern <alphabet-name> <ncells>     followed by lines "x y symbol-name"
//   periodic <w> <h>                     followed by h lines of w symbol
//                                        names, row y=0 first

std::string to_text(const Pattern& p, const Alphabet& a);
std::string to_text(const PeriodicConfig& x, const Alphabet& a);
Pattern pattern_from_text(std::istream& in, const Alphabet& a);
PeriodicConfig periodic_from_text(std::istream& in, const Alphabet& a);

}  // namespace sft

#endif  // SFT_GRID_HPP
