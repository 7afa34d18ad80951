#include "sft/squares.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>

namespace sft {

namespace {

enum Dir { kN = 0, kE = 1, kS = 2, kW = 3 };

int opp(int d) { return (d + 2) % 4; }

Cell step(Cell c, int d) {
    switch (d) {
        case kN: return Cell{c.x, c.y + 1};
        case kE: return Cell{c.x + 1, c.y};
        case kS: return Cell{c.x, c.y - 1};
        default: return Cell{c.x - 1, c.y};
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Squares

Pattern make_square(int n, int a_sym, int b_sym) {
    if (n < 0) throw std::invalid_argument("square size must be >= 0");
    Pattern p;
    int side = n + 2;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            bool ring = x == 0 || y == 0 || x == side - 1 || y == side - 1;
            p.set(Cell{x, y}, ring ? a_sym : b_sym);
        }
    return p;
}

Pattern compose_square(int n, const Pattern& A, const Pattern& B) {
    Rect ba = A.bbox(), bb = B.bbox();
    if (ba.w != ba.h || ba.w != bb.w || bb.w != bb.h || ba.w <= 0)
        throw std::invalid_argument("compose_square: macrosymbols must be equal squares");
    int j = ba.w;
    int side = n + 2;
    Pattern out;
    for (int Y = 0; Y < side; ++Y)
        for (int X = 0; X < side; ++X) {
            bool ring = X == 0 || Y == 0 || X == side - 1 || Y == side - 1;
            const Pattern& m = ring ? A : B;
            Rect mb = m.bbox();
            for (const auto& [c, s] : m.cells())
                out.set(Cell{c.x - mb.x0 + X * j, c.y - mb.y0 + Y * j}, s);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Packing checker

namespace {

// Rectangular 0/1 view of a window pattern.
struct BinWindow {
    Rect box;
    std::vector<int> cells;  // row-major within box

    int at(Cell c) const { return cells[static_cast<size_t>((c.y - box.y0) * box.w + (c.x - box.x0))]; }
    bool inside(Cell c) const { return box.contains(c); }
    bool on_edge(Cell c) const {
        return c.x == box.x0 || c.y == box.y0 || c.x == box.x0 + box.w - 1 ||
               c.y == box.y0 + box.h - 1;
    }
};

BinWindow to_bin(const Pattern& window, int a_sym, int b_sym) {
    BinWindow w;
    w.box = window.bbox();
    if (w.box.w <= 0 || w.box.h <= 0) throw std::invalid_argument("f_check: empty window");
    w.cells.assign(static_cast<size_t>(w.box.w) * static_cast<size_t>(w.box.h), -1);
    for (const auto& [c, s] : window.cells()) {
        int v = s == a_sym ? 0 : s == b_sym ? 1 : -1;
        if (v < 0) throw std::invalid_argument("f_check: symbol outside {A,B}");
        w.cells[static_cast<size_t>((c.y - w.box.y0) * w.box.w + (c.x - w.box.x0))] = v;
    }
    for (int v : w.cells)
        if (v < 0) throw std::invalid_argument("f_check: window support must be a full rectangle");
    return w;
}

struct Component {
    std::vector<Cell> cells;
    Rect bbox;
    bool touches_edge = false;
};

std::vector<Component> components(const BinWindow& w, int value) {
    std::vector<char> seen(w.cells.size(), 0);
    std::vector<Component> out;
    for (int y = w.box.y0; y < w.box.y0 + w.box.h; ++y)
        for (int x = w.box.x0; x < w.box.x0 + w.box.w; ++x) {
            Cell c0{x, y};
            size_t i0 = static_cast<size_t>((y - w.box.y0) * w.box.w + (x - w.box.x0));
            if (seen[i0] || w.at(c0) != value) continue;
            Component comp;
            std::vector<Cell> stack{c0};
            seen[i0] = 1;
            int x0 = x, x1 = x, y0 = y, y1 = y;
            while (!stack.empty()) {
                Cell c = stack.back();
                stack.pop_back();
                comp.cells.push_back(c);
                comp.touches_edge = comp.touches_edge || w.on_edge(c);
                x0 = std::min(x0, c.x); x1 = std::max(x1, c.x);
                y0 = std::min(y0, c.y); y1 = std::max(y1, c.y);
                for (int d = 0; d < 4; ++d) {
                    Cell n = step(c, d);
                    if (!w.inside(n) || w.at(n) != value) continue;
                    size_t i = static_cast<size_t>((n.y - w.box.y0) * w.box.w + (n.x - w.box.x0));
                    if (!seen[i]) { seen[i] = 1; stack.push_back(n); }
                }
            }
            comp.bbox = Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
            out.push_back(std::move(comp));
        }
    return out;
}

Violation make_violation(const BinWindow& w, Rect around, const std::string& rule) {
    Violation v;
    v.rule = rule;
    v.pos = Cell{around.x0, around.y0};
    for (int y = std::max(w.box.y0, around.y0 - 1);
         y <= std::min(w.box.y0 + w.box.h - 1, around.y0 + around.h); ++y)
        for (int x = std::max(w.box.x0, around.x0 - 1);
             x <= std::min(w.box.x0 + w.box.w - 1, around.x0 + around.w); ++x)
            v.pattern.set(Cell{x, y}, w.at(Cell{x, y}));
    return v;
}

bool rect_intersects(const Rect& a, const Rect& b) {
    return a.x0 < b.x0 + b.w && b.x0 < a.x0 + a.w && a.y0 < b.y0 + b.h && b.y0 < a.y0 + a.h;
}

}  // namespace

SquareReport f_check(const Pattern& window, int a_sym, int b_sym) {
    BinWindow w = to_bin(window, a_sym, b_sym);
    SquareReport rep;

    auto ring_cells_of = [](Rect interior) {
        std::vector<Cell> out;
        for (int x = interior.x0 - 1; x <= interior.x0 + interior.w; ++x) {
            out.push_back(Cell{x, interior.y0 - 1});
            out.push_back(Cell{x, interior.y0 + interior.h});
        }
        for (int y = interior.y0; y < interior.y0 + interior.h; ++y) {
            out.push_back(Cell{interior.x0 - 1, y});
            out.push_back(Cell{interior.x0 + interior.w, y});
        }
        return out;
    };

    std::set<Cell> marked_ring;  // border cells of detected complete squares

    // --- B components: complete squares, partial structures, background ---
    // Two passes: fat components first, so that a lone B squeezed between the
    // borders of larger squares (whose 8-ring is all A, but already claimed)
    // is read as background rather than as a 1-square.
    std::vector<const Component*> singles;
    std::vector<Component> b_comps = components(w, 1);
    for (const Component& comp : b_comps) {
        if (comp.touches_edge) {
            rep.partials.push_back(SquareInfo{Cell{comp.bbox.x0 - 1, comp.bbox.y0 - 1}, -1});
            continue;
        }
        bool fat = false;
        bool solid = static_cast<int>(comp.cells.size()) == comp.bbox.w * comp.bbox.h;
        for (const Cell& c : comp.cells) {
            if (c.x + 1 < comp.bbox.x0 + comp.bbox.w && c.y + 1 < comp.bbox.y0 + comp.bbox.h &&
                w.at(Cell{c.x + 1, c.y}) == 1 && w.at(Cell{c.x, c.y + 1}) == 1 &&
                w.at(Cell{c.x + 1, c.y + 1}) == 1) {
                fat = true;
                break;
            }
        }
        if (fat) {
            // A fat region away from the edge must be a complete square with a
            // full one-cell A border (including diagonal corners).
            bool ok = solid && comp.bbox.w == comp.bbox.h;
            if (ok)
                for (const Cell& rc : ring_cells_of(comp.bbox))
                    if (!w.inside(rc) || w.at(rc) != 0) { ok = false; break; }
            if (!ok) {
                rep.violations.push_back(make_violation(w, comp.bbox, "rule1"));
                continue;
            }
            SquareInfo sq{Cell{comp.bbox.x0 - 1, comp.bbox.y0 - 1}, comp.bbox.w};
            rep.squares.push_back(sq);
            rep.sizes.insert(sq.size);
            for (const Cell& rc : ring_cells_of(comp.bbox)) marked_ring.insert(rc);
        } else if (comp.cells.size() == 1) {
            singles.push_back(&comp);
        }
        // Thin components are legal background separating squares.
    }
    for (const Component* comp : singles) {
        // Single B with a full, unclaimed 8-cell A ring is a 1-square;
        // otherwise it is background filament material.
        bool all_a = true;
        for (const Cell& rc : ring_cells_of(comp->bbox))
            if (!w.inside(rc) || w.at(rc) != 0 || marked_ring.count(rc)) { all_a = false; break; }
        if (all_a) {
            SquareInfo sq{Cell{comp->bbox.x0 - 1, comp->bbox.y0 - 1}, 1};
            rep.squares.push_back(sq);
            rep.sizes.insert(1);
            for (const Cell& rc : ring_cells_of(comp->bbox)) marked_ring.insert(rc);
        }
    }

    // --- per-cell border sanity: every interior A has >= 2 orthogonal A ---
    for (int y = w.box.y0 + 1; y < w.box.y0 + w.box.h - 1; ++y)
        for (int x = w.box.x0 + 1; x < w.box.x0 + w.box.w - 1; ++x) {
            Cell c{x, y};
            if (w.at(c) != 0) continue;
            int a_nb = 0;
            for (int d = 0; d < 4; ++d) a_nb += w.at(step(c, d)) == 0;
            if (a_nb < 2)
                rep.violations.push_back(make_violation(w, Rect{x, y, 1, 1}, "rule2"));
        }

    // --- A accounting: every A away from the edge is ring material of a
    //     detected square or part of a 2x2 block (a 0-square) ---
    for (const Component& comp : components(w, 0)) {
        if (comp.touches_edge) continue;  // may extend to degenerate squares
        std::set<Cell> rest;
        for (const Cell& c : comp.cells)
            if (!marked_ring.count(c)) rest.insert(c);
        bool bad = false;
        while (!rest.empty() && !bad) {
            Cell c = *rest.begin();
            Cell blk[4] = {c, Cell{c.x + 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x + 1, c.y + 1}};
            for (const Cell& bc : blk)
                if (!rest.count(bc)) { bad = true; break; }
            if (bad) break;
            for (const Cell& bc : blk) rest.erase(bc);
            rep.squares.push_back(SquareInfo{c, 0});
            rep.sizes.insert(0);
        }
        if (bad) rep.violations.push_back(make_violation(w, comp.bbox, "rule2"));
    }

    // --- no two squares may share border cells ---
    for (size_t i = 0; i < rep.squares.size(); ++i)
        for (size_t j = i + 1; j < rep.squares.size(); ++j) {
            Rect ri = rep.squares[i].ring_box();
            Rect rj = rep.squares[j].ring_box();
            if (rect_intersects(ri, rj))
                rep.violations.push_back(make_violation(w, ri, "rule2"));
        }

    // --- coexisting sizes must differ by at most 1 ---
    for (auto it = rep.sizes.begin(); it != rep.sizes.end(); ++it)
        for (auto jt = std::next(it); jt != rep.sizes.end(); ++jt)
            if (*jt - *it >= 2) {
                Violation v;
                v.rule = "rule3";
                for (const SquareInfo& s : rep.squares)
                    if (s.size == *it || s.size == *jt) { v.pos = s.pos; break; }
                rep.violations.push_back(v);
            }

    return rep;
}

SquareReport f_check(const PeriodicConfig& x, int a_sym, int b_sym) {
    Rect win{-x.width(), -x.height(), 3 * x.width(), 3 * x.height()};
    return f_check(x.window(win), a_sym, b_sym);
}

// ---------------------------------------------------------------------------
// Truncated packing rules

std::vector<Pattern> PackingRules::enumerate(int d) const {
    if (d < 4) throw BoundTooSmall("square-packing rules need diameter >= 4");
    std::vector<Pattern> out;
    // Isolated A: an A whose four orthogonal neighbors are all B.
    Pattern iso;
    iso.set(Cell{0, 0}, a_);
    iso.set(Cell{1, 0}, b_);
    iso.set(Cell{-1, 0}, b_);
    iso.set(Cell{0, 1}, b_);
    iso.set(Cell{0, -1}, b_);
    out.push_back(iso);
    // Complete bordered fat rectangles that are not squares.
    for (int h = 2; h + 2 <= d; ++h)
        for (int wdt = 2; wdt + 2 <= d; ++wdt) {
            if (wdt == h) continue;
            Pattern p;
            for (int y = 0; y < h + 2; ++y)
                for (int x = 0; x < wdt + 2; ++x) {
                    bool ring = x == 0 || y == 0 || x == wdt + 1 || y == h + 1;
                    p.set(Cell{x, y}, ring ? a_ : b_);
                }
            out.push_back(p);
        }
    return out;
}

std::vector<Violation> PackingRules::check(const PeriodicConfig& x, int /*d*/) const {
    return f_check(x, a_, b_).violations;
}

// ---------------------------------------------------------------------------
// Arrow alphabet

const Alphabet& arrow_alphabet() {
    static const Alphabet a("arrows", {"1", "o", "wl", "wr", "wu", "wd", "wtl", "wtr",
                                       "wbl", "wbr", "gl", "gr", "gu", "gd", "gtl", "gtr",
                                       "gbl", "gbr"});
    return a;
}

namespace {

constexpr int kNumArrow = 18;

bool is_gray(int s) { return s >= kGL; }
bool is_arrow(int s) { return s >= kWL; }

// Offsets within one color block: l r u d tl tr bl br.
enum Off { oL = 0, oR, oU, oD, oTL, oTR, oBL, oBR };
enum Edge { eTop = 0, eBottom, eLeft, eRight };

int sym(int color, int off) { return 2 + 8 * color + off; }

// Which edge of a square outline an arrow belongs to (straight arrows only).
Edge edge_of(int off) {
    switch (off) {
        case oL: return eTop;
        case oR: return eBottom;
        case oD: return eLeft;
        default: return eRight;  // oU
    }
}

// Exterior direction of each edge.
int edge_ext(Edge e) {
    switch (e) {
        case eTop: return kN;
        case eBottom: return kS;
        case eLeft: return kW;
        default: return kE;
    }
}

// The symbols (of one color) that can occur on a given edge of an outline.
std::uint64_t edge_mask(int color, Edge e) {
    auto b = [&](int off) { return 1ull << sym(color, off); };
    switch (e) {
        case eTop: return b(oL) | b(oTL) | b(oTR);
        case eBottom: return b(oR) | b(oBL) | b(oBR);
        case eLeft: return b(oD) | b(oTL) | b(oBL);
        default: return b(oU) | b(oTR) | b(oBR);
    }
}

// Path direction bookkeeping: predecessor/successor sides of each arrow.
int pred_side(int off) {
    switch (off) {
        case oL: case oTL: return kE;
        case oR: case oBR: return kW;
        case oU: case oTR: return kS;
        default: return kN;  // oD, oBL
    }
}
int succ_side(int off) {
    switch (off) {
        case oL: case oTR: return kW;
        case oR: case oBL: return kE;
        case oU: case oBR: return kN;
        default: return kS;  // oD, oTL
    }
}

struct ArrowLaws {
    // req[s][d]: symbols acceptable directly in direction d from s, judged
    // from s's own side.  A pair is legal iff each symbol accepts the other.
    std::array<std::array<std::uint64_t, 4>, kNumArrow> req{};
    std::vector<std::uint64_t> allow_e, allow_n;
};

const ArrowLaws& arrow_laws() {
    static const ArrowLaws laws = [] {
        ArrowLaws L;
        std::uint64_t all = (1ull << kNumArrow) - 1;
        auto& req = L.req;

        // "1" constrains nothing by itself.
        for (int d = 0; d < 4; ++d) req[kOne][d] = all;

        // "o" is the path seed: the innermost outline winds tightly around it.
        req[kDot][kN] = (1ull << sym(0, oL)) | (1ull << sym(1, oL));
        req[kDot][kS] = (1ull << sym(0, oR)) | (1ull << sym(1, oR));
        req[kDot][kE] = (1ull << sym(0, oU)) | (1ull << sym(1, oU));
        req[kDot][kW] = (1ull << sym(0, oD)) | (1ull << sym(1, oD));

        for (int color = 0; color <= 1; ++color) {
            for (int off = 0; off < 8; ++off) {
                int s = sym(color, off);
                // Path continuation: same color, matching pred/succ sides.
                std::uint64_t succ_ok = 0, pred_ok = 0;
                for (int off2 = 0; off2 < 8; ++off2) {
                    int s2 = sym(color, off2);
                    if (pred_side(off2) == opp(succ_side(off))) succ_ok |= 1ull << s2;
                    if (succ_side(off2) == opp(pred_side(off))) pred_ok |= 1ull << s2;
                }
                req[s][succ_side(off)] = succ_ok;
                req[s][pred_side(off)] = pred_ok;

                bool straight = off <= oD;
                if (straight) {
                    Edge e = edge_of(off);
                    int ext = edge_ext(e);
                    int interior = opp(ext);
                    // Interior side: the next outline inward is always white
                    // (white nests in both colors), same edge, or the seed.
                    req[s][interior] = edge_mask(0, e) | (1ull << kDot);
                    if (color == 0) {
                        // White exterior: the immediately wrapping outline's
                        // matching edge runs alongside; directly outward from a
                        // straight stretch that is always a straight arrow.
                        req[s][ext] = (1ull << sym(0, off)) | (1ull << sym(1, off));
                    } else {
                        // Gray exterior: background or the facing edge of
                        // another gray outline.
                        Edge facing = e == eTop ? eBottom : e == eBottom ? eTop
                                    : e == eLeft ? eRight : eLeft;
                        req[s][ext] = (1ull << kOne) | edge_mask(1, facing);
                    }
                } else {
                    // Corners have two exterior sides.
                    std::array<int, 2> exts{};
                    std::array<Edge, 2> along{};  // the edge running on that side
                    switch (off) {
                        case oTL: exts = {kN, kW}; along = {eTop, eLeft}; break;
                        case oTR: exts = {kN, kE}; along = {eTop, eRight}; break;
                        case oBL: exts = {kS, kW}; along = {eBottom, eLeft}; break;
                        default:  exts = {kS, kE}; along = {eBottom, eRight}; break;
                    }
                    for (int i = 0; i < 2; ++i) {
                        int ext = exts[i];
                        if (color == 0) {
                            // Outward from a white corner lies the straight
                            // stretch of the wrapping outline.
                            int along_off = along[i] == eTop ? oL : along[i] == eBottom ? oR
                                          : along[i] == eLeft ? oD : oU;
                            req[s][ext] = (1ull << sym(0, along_off)) | (1ull << sym(1, along_off));
                        } else {
                            Edge facing = along[i] == eTop ? eBottom
                                        : along[i] == eBottom ? eTop
                                        : along[i] == eLeft ? eRight : eLeft;
                            req[s][ext] = (1ull << kOne) | edge_mask(1, facing);
                        }
                    }
                }
            }
        }

        L.allow_e.assign(kNumArrow, 0);
        L.allow_n.assign(kNumArrow, 0);
        for (int a = 0; a < kNumArrow; ++a)
            for (int b = 0; b < kNumArrow; ++b) {
                bool e_ok = ((req[a][kE] >> b) & 1) && ((req[b][kW] >> a) & 1);
                bool n_ok = ((req[a][kN] >> b) & 1) && ((req[b][kS] >> a) & 1);
                if (e_ok) L.allow_e[static_cast<size_t>(a)] |= 1ull << b;
                if (n_ok) L.allow_n[static_cast<size_t>(a)] |= 1ull << b;
            }
        return L;
    }();
    return laws;
}

// Forbidden 2x2 blocks over the arrow alphabet.
class ArrowBlockRules : public RuleGenerator {
public:
    std::string name() const override { return "arrow-2x2"; }

    std::vector<Pattern> enumerate(int d) const override {
        if (d < 2) throw BoundTooSmall("arrow rules need diameter >= 2");
        const ArrowLaws& L = arrow_laws();
        std::vector<Pattern> out;
        for (int a = 0; a < kNumArrow; ++a)
            for (int b = 0; b < kNumArrow; ++b)
                for (int c = 0; c < kNumArrow; ++c)
                    for (int e = 0; e < kNumArrow; ++e) {
                        // cells: a=(0,0) b=(1,0) c=(0,1) e=(1,1)
                        bool ok = ((L.allow_e[static_cast<size_t>(a)] >> b) & 1) &&
                                  ((L.allow_e[static_cast<size_t>(c)] >> e) & 1) &&
                                  ((L.allow_n[static_cast<size_t>(a)] >> c) & 1) &&
                                  ((L.allow_n[static_cast<size_t>(b)] >> e) & 1);
                        if (ok && (a != kOne || b != kOne || c != kOne || e != kOne)) continue;
                        out.push_back(Pattern::rectangle(2, 2, {a, b, c, e}));
                    }
        return out;
    }

    std::vector<Violation> check(const PeriodicConfig& x, int /*d*/) const override {
        const ArrowLaws& L = arrow_laws();
        std::vector<Violation> out;
        auto bad = [&](int x0, int y0, const std::string& why) {
            Violation v;
            v.pos = Cell{x0, y0};
            v.rule = why;
            v.pattern = Pattern::rectangle(2, 2, {x.at(x0, y0), x.at(x0 + 1, y0),
                                                  x.at(x0, y0 + 1), x.at(x0 + 1, y0 + 1)});
            out.push_back(std::move(v));
        };
        for (int y = 0; y < x.height(); ++y)
            for (int xx = 0; xx < x.width(); ++xx) {
                int a = x.at(xx, y), b = x.at(xx + 1, y);
                int c = x.at(xx, y + 1), e = x.at(xx + 1, y + 1);
                if (!((L.allow_e[static_cast<size_t>(a)] >> b) & 1) ||
                    !((L.allow_e[static_cast<size_t>(c)] >> e) & 1) ||
                    !((L.allow_n[static_cast<size_t>(a)] >> c) & 1) ||
                    !((L.allow_n[static_cast<size_t>(b)] >> e) & 1))
                    bad(xx, y, "arrow-adjacency");
                else if (a == kOne && b == kOne && c == kOne && e == kOne)
                    bad(xx, y, "arrow-2x2-of-1s");
            }
        return out;
    }
};

}  // namespace

const std::vector<std::uint64_t>& arrow_allowed_east() { return arrow_laws().allow_e; }
const std::vector<std::uint64_t>& arrow_allowed_north() { return arrow_laws().allow_n; }

ForbiddenSet y1_rules() {
    ForbiddenSet F;
    F.add_generator(std::make_shared<ArrowBlockRules>());
    return F;
}

TilingProblem y1_problem(Region region) {
    TilingProblem p;
    p.alphabet_size = kNumArrow;
    p.allow_e = arrow_allowed_east();
    p.allow_n = arrow_allowed_north();
    p.forbidden.push_back(Pattern::uniform(2, 2, kOne));
    p.region = std::move(region);
    return p;
}

Pattern y1_sample_block() {
    // Top row first; cell (0,0) of the pattern is the lower-left corner.
    static const char* rows[12][10] = {
        {"wu", "gu", "1", "1", "1", "gbl", "gr", "gr", "gbr", "gd"},
        {"wu", "gu", "1", "gtl", "gl", "gl", "gl", "gtr", "1", "gd"},
        {"wu", "gu", "1", "gd", "wtl", "wl", "wtr", "gu", "1", "gd"},
        {"wu", "gu", "1", "gd", "wd", "o", "wu", "gu", "1", "gbl"},
        {"wu", "gu", "1", "gd", "wbl", "wr", "wbr", "gu", "1", "1"},
        {"wu", "gu", "1", "gbl", "gr", "gr", "gr", "gbr", "gtl", "gtr"},
        {"wu", "gu", "gtl", "gl", "gl", "gl", "gtr", "1", "gbl", "gbr"},
        {"wu", "gu", "gd", "wtl", "wl", "wtr", "gu", "gtl", "gl", "gl"},
        {"wu", "gu", "gd", "wd", "o", "wu", "gu", "gd", "wtl", "wtr"},
        {"wu", "gu", "gd", "wbl", "wr", "wbr", "gu", "gd", "wbl", "wbr"},
        {"wu", "gu", "gbl", "gr", "gr", "gr", "gbr", "gbl", "gr", "gr"},
        {"wu", "gu", "1", "1", "1", "1", "1", "1", "1", "1"},
    };
    const Alphabet& a = arrow_alphabet();
    Pattern p;
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 10; ++c) p.set(Cell{c, 11 - r}, a.id_of(rows[r][c]));
    return p;
}

Pattern h_factor(const Pattern& p) {
    Pattern out;
    for (const auto& [c, s] : p.cells()) {
        if (s < 0 || s >= kNumArrow) throw std::invalid_argument("h_factor: not an arrow symbol");
        out.set(c, is_gray(s) ? 0 : 1);
    }
    return out;
}

PeriodicConfig h_factor(const PeriodicConfig& x) {
    PeriodicConfig out = PeriodicConfig::uniform(x.width(), x.height(), 0);
    for (int y = 0; y < x.height(); ++y)
        for (int xx = 0; xx < x.width(); ++xx) {
            int s = x.at(xx, y);
            if (s < 0 || s >= kNumArrow) throw std::invalid_argument("h_factor: not an arrow symbol");
            out.set(xx, y, is_gray(s) ? 0 : 1);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Constructive extension

int extension_margin(SquareTypeT t) {
    return (t.hi + 4) * (t.hi + 4);
}

namespace {

// Parse a seed pattern into complete squares.  The pattern may have any
// support; every B component must be (completable to) a solid square.  Thin
// line components and components whose completion is ambiguous are rejected.
std::vector<SquareInfo> parse_seed(const Pattern& v, SquareTypeT t, bool* type_bad) {
    *type_bad = false;
    std::vector<SquareInfo> out;
    std::set<Cell> todo;
    for (const auto& [c, s] : v.cells()) {
        if (s == 1) todo.insert(c);
        else if (s != 0) throw std::invalid_argument("seed symbols must be 0/1");
    }
    while (!todo.empty()) {
        // flood fill one B component
        std::vector<Cell> stack{*todo.begin()};
        todo.erase(todo.begin());
        std::vector<Cell> comp;
        int x0 = stack[0].x, x1 = stack[0].x, y0 = stack[0].y, y1 = stack[0].y;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            comp.push_back(c);
            x0 = std::min(x0, c.x); x1 = std::max(x1, c.x);
            y0 = std::min(y0, c.y); y1 = std::max(y1, c.y);
            for (int d = 0; d < 4; ++d) {
                Cell n = step(c, d);
                auto it = todo.find(n);
                if (it != todo.end()) { todo.erase(it); stack.push_back(n); }
            }
        }
        int wdt = x1 - x0 + 1, hgt = y1 - y0 + 1;
        if (static_cast<int>(comp.size()) != wdt * hgt)
            throw CannotExtend("seed component is not a solid rectangle");
        // Pick the smallest allowed size covering the component.
        int size = -1;
        for (int s : {t.lo, t.hi})
            if (s >= std::max(wdt, hgt)) { size = s; break; }
        if (size < 0) {
            *type_bad = true;
            size = std::max(wdt, hgt);
        }
        // Interior keeps the component's lower-left corner.
        SquareInfo sq{Cell{x0 - 1, y0 - 1}, size};
        // Existing seed cells must agree with the completed square.
        Rect ring = sq.ring_box();
        for (int y = ring.y0; y < ring.y0 + ring.h; ++y)
            for (int x = ring.x0; x < ring.x0 + ring.w; ++x) {
                bool border = x == ring.x0 || y == ring.y0 || x == ring.x0 + ring.w - 1 ||
                              y == ring.y0 + ring.h - 1;
                auto have = v.get(Cell{x, y});
                if (have && *have != (border ? 0 : 1))
                    throw CannotExtend("seed cells contradict square completion");
            }
        out.push_back(sq);
    }
    // Overlap check between completed rings.
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            if (rect_intersects(out[i].ring_box(), out[j].ring_box()))
                throw CannotExtend("seed squares overlap");
    return out;
}

// One run of length L to be filled with `lead_unit` (optional, first) plus
// copies of `unit`, with 0/1 gaps at internal junctions and at run ends that
// abut existing material (`slot_lo`/`slot_hi`); flush otherwise.  Returns
// the offsets (from run start) and lengths of the placed units.
std::optional<std::vector<std::pair<int, int>>> pack_run(int L, int unit, int lead_unit,
                                                         bool slot_lo, bool slot_hi) {
    if (L < 0) return std::nullopt;
    for (int c = 0;; ++c) {
        int m = c + (lead_unit > 0 ? 1 : 0);
        int sum = c * unit + lead_unit;
        if (sum > L) return std::nullopt;
        int slots = m == 0 ? ((slot_lo || slot_hi) ? 1 : 0)
                           : m - 1 + (slot_lo ? 1 : 0) + (slot_hi ? 1 : 0);
        if (L - sum <= slots) {
            int extra = L - sum;
            std::vector<std::pair<int, int>> placed;
            int pos = 0;
            // slot order: lo end, then internal junctions bottom-up
            int gaps_left = extra;
            if (slot_lo && gaps_left > 0) { pos += 1; --gaps_left; }
            for (int i = 0; i < m; ++i) {
                int u = (i == 0 && lead_unit > 0) ? lead_unit : unit;
                placed.emplace_back(pos, u);
                pos += u;
                bool internal = i + 1 < m;
                if (internal && gaps_left > 0) { pos += 1; --gaps_left; }
            }
            return placed;
        }
    }
}

struct Stripe {
    int y = 0;
    int size = 0;
    std::vector<int> seed_xs;  // ring x positions of seed squares, sorted
};

}  // namespace

Pattern extend_block(const Pattern& v, SquareTypeT t, Rect R) {
    if (t.lo < 0 || (t.hi != t.lo && t.hi != t.lo + 1))
        throw std::invalid_argument("type must be n or (n,n+1)");
    if (R.w <= 0 || R.h <= 0) throw std::invalid_argument("empty region");
    int N = extension_margin(t);

    bool type_bad = false;
    std::vector<SquareInfo> seeds = v.empty() ? std::vector<SquareInfo>{}
                                              : parse_seed(v, t, &type_bad);
    if (type_bad) throw TypeInconsistent("seed squares are inconsistent with the requested type");
    if (!v.empty()) {
        Rect vb = v.bbox();
        if (R.x0 > vb.x0 - N || R.y0 > vb.y0 - N || R.x0 + R.w < vb.x0 + vb.w + N ||
            R.y0 + R.h < vb.y0 + vb.h + N)
            throw CannotExtend("region leaves less than the required margin around the seed");
    }

    // Group seeds into horizontal stripes (equal y and size).
    std::vector<Stripe> stripes;
    {
        std::map<int, Stripe> by_y;
        for (const SquareInfo& s : seeds) {
            auto [it, fresh] = by_y.try_emplace(s.pos.y, Stripe{s.pos.y, s.size, {}});
            if (!fresh && it->second.size != s.size)
                throw CannotExtend("seed squares at the same height have different sizes");
            it->second.seed_xs.push_back(s.pos.x);
        }
        for (auto& [y, st] : by_y) {
            std::sort(st.seed_xs.begin(), st.seed_xs.end());
            stripes.push_back(st);
        }
        for (size_t i = 0; i + 1 < stripes.size(); ++i)
            if (stripes[i + 1].y < stripes[i].y + stripes[i].size + 2)
                throw CannotExtend("seed squares overlap vertically without sharing a stripe");
    }

    // Fill the vertical layout with new stripes of size t.lo.
    std::vector<Stripe> final_stripes;
    auto add_fill = [&](int seg_start, const std::optional<std::vector<std::pair<int, int>>>& run) {
        for (auto [off, u] : *run) final_stripes.push_back(Stripe{seg_start + off, u - 2, {}});
    };
    struct Seg { int start, len; bool lo_adj, hi_adj; };
    std::vector<Seg> segs;
    if (stripes.empty()) {
        segs.push_back({R.y0, R.h, false, false});
    } else {
        segs.push_back({R.y0, stripes.front().y - R.y0, false, true});
        for (size_t i = 0; i + 1 < stripes.size(); ++i) {
            int lo = stripes[i].y + stripes[i].size + 2;
            segs.push_back({lo, stripes[i + 1].y - lo, true, true});
        }
        int last = stripes.back().y + stripes.back().size + 2;
        segs.push_back({last, R.y0 + R.h - last, true, false});
    }
    // If the type is mixed and the seeds realize only one size, one fill
    // stripe takes the missing size.
    int missing = -1;
    if (t.mixed()) {
        bool have_hi = false;
        for (const Stripe& s : stripes) have_hi = have_hi || s.size == t.hi;
        // Fill stripes have size t.lo, so only t.hi can stay unrealized.
        if (!have_hi) missing = t.hi;
    }
    bool missing_placed = missing < 0;
    for (const Seg& sg : segs) {
        std::optional<std::vector<std::pair<int, int>>> run;
        if (!missing_placed) {
            run = pack_run(sg.len, t.lo + 2, missing + 2, sg.lo_adj, sg.hi_adj);
            if (run) missing_placed = true;
        }
        if (!run) run = pack_run(sg.len, t.lo + 2, 0, sg.lo_adj, sg.hi_adj);
        if (!run) throw CannotExtend("vertical layout cannot be packed flush");
        add_fill(sg.start, run);
    }
    if (!missing_placed) throw CannotExtend("mixed type cannot be realized in the region");
    for (const Stripe& s : stripes) final_stripes.push_back(s);
    std::sort(final_stripes.begin(), final_stripes.end(),
              [](const Stripe& a, const Stripe& b) { return a.y < b.y; });
    {
        std::set<int> realized;
        for (const Stripe& s : final_stripes) realized.insert(s.size);
        std::set<int> want{t.lo, t.hi};
        if (realized != want) throw CannotExtend("type not realized in the region");
    }

    // Horizontal layout within each stripe.
    std::vector<SquareInfo> placed;
    for (const Stripe& st : final_stripes) {
        int u = st.size + 2;
        auto place_run = [&](int seg_start, int len, bool lo_adj, bool hi_adj) {
            auto run = pack_run(len, u, 0, lo_adj, hi_adj);
            if (!run) throw CannotExtend("horizontal layout cannot be packed flush");
            for (auto [off, uu] : *run)
                placed.push_back(SquareInfo{Cell{seg_start + off, st.y}, uu - 2});
        };
        if (st.seed_xs.empty()) {
            place_run(R.x0, R.w, false, false);
        } else {
            place_run(R.x0, st.seed_xs.front() - R.x0, false, true);
            for (size_t i = 0; i < st.seed_xs.size(); ++i) {
                placed.push_back(SquareInfo{Cell{st.seed_xs[i], st.y}, st.size});
                int lo = st.seed_xs[i] + u;
                int hi = i + 1 < st.seed_xs.size() ? st.seed_xs[i + 1] : R.x0 + R.w;
                if (hi < lo) throw CannotExtend("seed squares overlap horizontally");
                place_run(lo, hi - lo, true, i + 1 < st.seed_xs.size());
            }
        }
    }

    // Paint: background 1 everywhere, square borders 0.
    Pattern out;
    for (int y = R.y0; y < R.y0 + R.h; ++y)
        for (int x = R.x0; x < R.x0 + R.w; ++x) out.set(Cell{x, y}, 1);
    for (const SquareInfo& s : placed) {
        Rect rb = s.ring_box();
        for (int y = rb.y0; y < rb.y0 + rb.h; ++y)
            for (int x = rb.x0; x < rb.x0 + rb.w; ++x)
                if (x == rb.x0 || y == rb.y0 || x == rb.x0 + rb.w - 1 || y == rb.y0 + rb.h - 1)
                    out.set(Cell{x, y}, 0);
    }

    // The seed must be reproduced verbatim.
    for (const auto& [c, s] : v.cells())
        if (out.get(c) != s) throw CannotExtend("seed not reproduced by the packing");
    return out;
}

bool independence_witness(const Pattern& w, const Pattern& v, SquareTypeT t, int m) {
    if (m < 1) throw std::invalid_argument("need at least one plot");
    if (m > 4) throw ResourceLimit("independence witness limited to 4 plots");
    // Precondition: t must be a possible type of each pattern on its own.
    for (const Pattern* p : {&w, &v}) {
        bool type_bad = false;
        try {
            parse_seed(*p, t, &type_bad);
        } catch (const CannotExtend&) {
            throw PreconditionFailed("pattern is not a parseable square seed");
        }
        if (type_bad) throw PreconditionFailed("type is not a common type of the patterns");
    }

    int N = extension_margin(t);
    int k = std::max(w.diameter(), v.diameter());
    int P = 2 * N + k;

    TilingProblem tp;
    tp.alphabet_size = 2;
    tp.forbidden = PackingRules().enumerate(8);
    tp.region = Region{m * P, P, BoundaryMode::Free, {}};

    for (std::uint32_t choice = 0; choice < (1u << m); ++choice) {
        Pattern assembly;
        try {
            for (int i = 0; i < m; ++i) {
                const Pattern& pick = (choice >> i) & 1 ? v : w;
                Rect pb = pick.bbox();
                Pattern seed = pick.shifted(i * P + N - pb.x0, N - pb.y0);
                Pattern block = extend_block(seed, t, Rect{i * P, 0, P, P});
                for (const auto& [c, s] : block.cells()) assembly.set(c, s);
            }
        } catch (const CannotExtend&) {
            return false;
        }
        if (!f_check(assembly).ok()) return false;
        std::map<Cell, int> pins(assembly.cells().begin(), assembly.cells().end());
        if (complete(tp, pins).status != SolveStatus::Sat) return false;
    }
    return true;
}

}  // namespace sft
