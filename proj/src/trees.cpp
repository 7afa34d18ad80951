#include "sft/trees.hpp"

#include "sft/squares.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace sft {

// ---------------------------------------------------------------------------
// Label trees

std::vector<int> LabelTree::child_labels(const TreeNode& node) const {
    std::vector<int> out;
    for (const TreeNode& n : nodes) {
        if (n.size() != node.size() + 1) continue;
        if (!std::equal(node.begin(), node.end(), n.begin())) continue;
        out.push_back(n.back());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void LabelTree::validate() const {
    if (!contains(TreeNode{})) throw PreconditionFailed("tree: missing root");
    for (const TreeNode& n : nodes) {
        for (int lbl : n) {
            if (lbl < 0) throw PreconditionFailed("tree: negative label");
            if (flavor == TreeFlavor::TwoOmega && lbl % 2 != 0)
                throw PreconditionFailed("tree: odd label under flavor 2omega");
        }
        if (!n.empty()) {
            TreeNode parent(n.begin(), n.end() - 1);
            if (!contains(parent)) throw PreconditionFailed("tree: not prefix-closed");
        }
    }
    for (const TreeNode& p : promises)
        if (!contains(p)) throw PreconditionFailed("tree: promise on a non-node");
}

// ---------------------------------------------------------------------------
// Text format

std::string node_to_text(const TreeNode& node) {
    if (node.empty()) return "()";
    std::ostringstream os;
    for (int n : node) os << '(' << n << ',' << n + 1 << ')';
    return os.str();
}

static TreeNode node_from_text(const std::string& s) {
    if (s == "()") return {};
    TreeNode out;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '(') throw std::runtime_error("tree: expected '(' in node '" + s + "'");
        size_t comma = s.find(',', i), close = s.find(')', i);
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            throw std::runtime_error("tree: malformed label in node '" + s + "'");
        int n = std::stoi(s.substr(i + 1, comma - i - 1));
        int m = std::stoi(s.substr(comma + 1, close - comma - 1));
        if (m != n + 1) throw std::runtime_error("tree: label must be (n,n+1) in '" + s + "'");
        out.push_back(n);
        i = close + 1;
    }
    return out;
}

LabelTree tree_from_text(std::istream& in) {
    LabelTree t;
    t.nodes.clear();  // the root line "()" must be explicit in the text
    bool flavor_given = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank line
        if (tok == "#") continue;
        try {
            if (tok == "flavor") {
                std::string f;
                ls >> f;
                if (f == "omega") t.flavor = TreeFlavor::Omega;
                else if (f == "2omega") t.flavor = TreeFlavor::TwoOmega;
                else throw std::runtime_error("tree: unknown flavor '" + f + "'");
                flavor_given = true;
                continue;
            }
            bool promise = false;
            if (tok == "*") {
                promise = true;
                if (!(ls >> tok)) throw std::runtime_error("tree: '*' without a node");
            }
            TreeNode n = node_from_text(tok);
            t.nodes.insert(n);
            if (promise) t.promises.insert(n);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!flavor_given) {
        bool any = false, all_even = true;
        for (const TreeNode& n : t.nodes)
            for (int lbl : n) {
                any = true;
                if (lbl % 2 != 0) all_even = false;
            }
        t.flavor = (any && all_even) ? TreeFlavor::TwoOmega : TreeFlavor::Omega;
    }
    t.validate();
    return t;
}

LabelTree tree_from_text(const std::string& text) {
    std::istringstream in(text);
    return tree_from_text(in);
}

std::string tree_to_text(const LabelTree& t) {
    std::ostringstream os;
    os << "flavor " << (t.flavor == TreeFlavor::TwoOmega ? "2omega" : "omega") << '\n';
    for (const TreeNode& n : t.nodes) {
        if (t.promises.count(n)) os << "* ";
        os << node_to_text(n) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Macrosymbols

long long macro_side(const TreeNode& sigma) {
    long long j = 1;
    for (int n : sigma) {
        if (n < 0) throw PreconditionFailed("macro_side: negative label");
        if (j > std::numeric_limits<long long>::max() / (n + 3))
            throw ResourceLimit("macro_side: side overflows");
        j *= n + 3;
    }
    return j;
}

namespace {

// Replaces each cell of `layout` (over {0,1}) by a copy of A or B (square
// patterns of equal side, anchored at the origin).
Pattern substitute(const Pattern& layout, const Pattern& A, const Pattern& B) {
    int side = A.bbox().w;
    Pattern out;
    for (const auto& [c, s] : layout.cells()) {
        const Pattern& sub = s == 0 ? A : B;
        for (const auto& [sc, ss] : sub.cells())
            out.set(Cell{c.x * side + sc.x, c.y * side + sc.y}, ss);
    }
    return out;
}

// Macro layout of A_{sigma+(n,n+1)} over {0=A_sigma, 1=B_sigma}: an n-square
// in the lower-left plus a top row and right column of B, total side n+3.
Pattern a_layout(int n) {
    Pattern p = make_square(n);  // ring 0, interior 1, side n+2
    for (int x = 0; x < n + 3; ++x) p.set(Cell{x, n + 2}, 1);
    for (int y = 0; y < n + 3; ++y) p.set(Cell{n + 2, y}, 1);
    return p;
}

}  // namespace

Pattern render_macrosymbol(const TreeNode& sigma, Macro which) {
    if (sigma.empty()) {
        Pattern p;
        p.set(Cell{0, 0}, which == Macro::A ? 0 : 1);
        return p;
    }
    macro_side(sigma);  // overflow guard
    TreeNode parent(sigma.begin(), sigma.end() - 1);
    int n = sigma.back();
    Pattern layout = which == Macro::A ? a_layout(n) : make_square(n + 1);
    return substitute(layout, render_macrosymbol(parent, Macro::A),
                      render_macrosymbol(parent, Macro::B));
}

// ---------------------------------------------------------------------------
// Parsing helpers

namespace {

// True iff the j x j window of x at (ox, oy) equals pat (anchored at origin).
bool block_is(const PeriodicConfig& x, int ox, int oy, const Pattern& pat, int j) {
    for (int dy = 0; dy < j; ++dy)
        for (int dx = 0; dx < j; ++dx)
            if (x.at(ox + dx, oy + dy) != pat.at(Cell{dx, dy})) return false;
    return true;
}

// True iff every j-grid block of x with offset g parses as A or B.
bool grid_regular(const PeriodicConfig& x, Cell g, const Pattern& A, const Pattern& B, int j) {
    int W = std::lcm(x.width(), j) / j;
    int H = std::lcm(x.height(), j) / j;
    for (int v = 0; v < H; ++v)
        for (int u = 0; u < W; ++u) {
            int ox = g.x + j * u, oy = g.y + j * v;
            if (!block_is(x, ox, oy, A, j) && !block_is(x, ox, oy, B, j)) return false;
        }
    return true;
}

// The macro {0,1} configuration read off a regular parse.
PeriodicConfig macro_config(const PeriodicConfig& x, Cell g, const Pattern& A, int j) {
    int W = std::lcm(x.width(), j) / j;
    int H = std::lcm(x.height(), j) / j;
    PeriodicConfig y = PeriodicConfig::uniform(W, H, 1);
    for (int v = 0; v < H; ++v)
        for (int u = 0; u < W; ++u)
            if (block_is(x, g.x + j * u, g.y + j * v, A, j)) y.set(u, v, 0);
    return y;
}

bool is_uniform(const PeriodicConfig& x, int s) {
    for (int v = 0; v < x.height(); ++v)
        for (int u = 0; u < x.width(); ++u)
            if (x.at(u, v) != s) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types

std::strong_ordering operator<=>(const TypeString& a, const TypeString& b) {
    auto terminal_key = [](const TypeString& s) -> long long {
        switch (s.terminal) {
        case TypeString::Terminal::Nat: return 2LL * s.t;
        case TypeString::Terminal::Pair: return 2LL * s.t + 1;
        case TypeString::Terminal::OmegaTail: return std::numeric_limits<long long>::max() - 1;
        case TypeString::Terminal::Inf: return std::numeric_limits<long long>::max();
        case TypeString::Terminal::Path: return -1;  // before every extension
        }
        return 0;
    };
    auto key = [&](const TypeString& s, size_t i) -> long long {
        if (i < s.prefix.size()) return 2LL * s.prefix[i] + 1;
        return terminal_key(s);
    };
    size_t na = a.prefix.size() + 1, nb = b.prefix.size() + 1;
    for (size_t i = 0; i < std::min(na, nb); ++i) {
        long long ka = key(a, i), kb = key(b, i);
        if (ka != kb) return ka <=> kb;
    }
    // Equal through the shorter string incl. its terminal: the terminal key
    // differs from any label key unless the strings coincide.
    return na <=> nb;
}

std::string to_string(const TypeString& s) {
    std::string out = s.prefix.empty() ? "" : node_to_text(s.prefix);
    switch (s.terminal) {
    case TypeString::Terminal::Nat: out += std::to_string(s.t); break;
    case TypeString::Terminal::Pair:
        out += "(" + std::to_string(s.t) + "," + std::to_string(s.t + 1) + ")";
        break;
    case TypeString::Terminal::Inf: out += "inf"; break;
    case TypeString::Terminal::OmegaTail: out += "..."; break;
    case TypeString::Terminal::Path: out += "path"; break;
    }
    return out;
}

TypeResult type_of(const PeriodicConfig& x, const LabelTree& t) {
    t.validate();
    TypeResult res;
    TreeNode cur;
    Cell g{0, 0};
    int j = 1;
    // Descend to the deepest node whose macro alphabet tiles x.
    bool descended = true;
    while (descended) {
        descended = false;
        for (int n : t.child_labels(cur)) {
            TreeNode child = cur;
            child.push_back(n);
            long long jc = macro_side(child);
            if (jc > 64 || std::lcm<long long>(x.width(), jc) * std::lcm<long long>(x.height(), jc) > 1 << 22)
                continue;  // window cannot certify a parse this coarse
            Pattern A = render_macrosymbol(child, Macro::A);
            Pattern B = render_macrosymbol(child, Macro::B);
            // Finer alignments refine the current one.
            for (int ay = 0; ay < n + 3 && !descended; ++ay)
                for (int ax = 0; ax < n + 3; ++ax) {
                    Cell gc{g.x + j * ax, g.y + j * ay};
                    if (grid_regular(x, gc, A, B, static_cast<int>(jc))) {
                        cur = child;
                        g = gc;
                        j = static_cast<int>(jc);
                        res.alignment.push_back(Cell{g.x % j, g.y % j});
                        descended = true;
                        break;
                    }
                }
            if (descended) break;
        }
    }
    // Read the square-size type at the deepest level.
    PeriodicConfig y = cur.empty() ? x
                                   : macro_config(x, g, render_macrosymbol(cur, Macro::A), j);
    SquareReport rep = f_check(y);
    if (!rep.ok())
        throw PreconditionFailed("type_of: not in the shift (" + rep.violations.front().rule +
                                 " at level " + node_to_text(cur) + ")");
    res.type.prefix = cur;
    if (rep.sizes.empty()) {
        if (is_uniform(y, 0)) {
            res.type.terminal = TypeString::Terminal::Nat;  // tight 0-squares
            res.type.t = 0;
        } else {
            res.type.terminal = TypeString::Terminal::Inf;  // no finite squares
        }
    } else if (rep.sizes.size() == 1) {
        res.type.terminal = TypeString::Terminal::Nat;
        res.type.t = *rep.sizes.begin();
    } else {
        res.type.terminal = TypeString::Terminal::Pair;
        res.type.t = *rep.sizes.begin();
    }
    return res;
}

namespace {

void emit_types(const LabelTree& t, const TreeNode& node, int cutoff,
                std::vector<TypeString>& out) {
    if (t.promises.count(node))
        out.push_back(TypeString{node, TypeString::Terminal::Path, 0});
    std::vector<int> members = t.child_labels(node);
    int top = cutoff;
    if (!members.empty()) top = std::max(top, members.back() + 1);
    size_t mi = 0;
    for (int n = 0; n <= top; ++n) {
        out.push_back(TypeString{node, TypeString::Terminal::Nat, n});
        if (mi < members.size() && members[mi] == n) {
            TreeNode child = node;
            child.push_back(n);
            emit_types(t, child, cutoff, out);
            ++mi;
        } else {
            out.push_back(TypeString{node, TypeString::Terminal::Pair, n});
        }
    }
    out.push_back(TypeString{node, TypeString::Terminal::OmegaTail, 0});
    out.push_back(TypeString{node, TypeString::Terminal::Inf, 0});
}

}  // namespace

std::vector<TypeString> types_universe(const LabelTree& t, int cutoff) {
    t.validate();
    if (cutoff < 0) throw PreconditionFailed("types_universe: negative cutoff");
    std::vector<TypeString> out;
    emit_types(t, TreeNode{}, cutoff, out);
    return out;
}

// ---------------------------------------------------------------------------
// Ranks and fattening

TreeRankResult tree_rank(const LabelTree& t, const TreeNode& node) {
    if (!t.contains(node)) throw PreconditionFailed("tree_rank: node not in tree");
    if (t.promises.count(node)) return TreeRankResult{false, {}};
    std::uint64_t best = 0;
    for (int n : t.child_labels(node)) {
        TreeNode child = node;
        child.push_back(n);
        TreeRankResult r = tree_rank(t, child);
        if (!r.well_founded) return r;
        best = std::max(best, r.rank.as_nat());
    }
    return TreeRankResult{true, Ordinal::nat(best + 1)};
}

FattenedTree::FattenedTree(LabelTree skeleton) : skel_(std::move(skeleton)) {
    skel_.validate();
}

std::optional<TreeNode> FattenedTree::decode(const TreeNode& fat_node) const {
    TreeNode pos;
    for (int lbl : fat_node) {
        if (skel_.promises.count(pos)) return pos;  // promise: accept anything below
        if (lbl < 0 || lbl % 2 != 0) return std::nullopt;
        std::vector<int> c = skel_.child_labels(pos);
        if (c.empty()) return std::nullopt;
        pos.push_back(c[static_cast<size_t>(lbl / 2) % c.size()]);
    }
    return pos;
}

bool FattenedTree::contains(const TreeNode& fat_node) const {
    return decode(fat_node).has_value();
}

TreeRankResult FattenedTree::rank_of(const TreeNode& fat_node) const {
    std::optional<TreeNode> pos = decode(fat_node);
    if (!pos) throw PreconditionFailed("rank_of: node not in fattened tree");
    return tree_rank(skel_, *pos);
}

FattenedTree fatten(const LabelTree& s) { return FattenedTree(s); }

// ---------------------------------------------------------------------------
// Order terms

static OrderTerm tree_term(const LabelTree& t, const TreeNode& node) {
    std::vector<OrderTerm> parts;
    int prev = -1;
    for (int n : t.child_labels(node)) {
        // Labels strictly between the previous member and this one are atoms.
        int atoms = prev < 0 ? 2 * n + 1 : 2 * (n - prev) - 1;
        for (int i = 0; i < atoms; ++i) parts.push_back(OrderTerm::atom());
        TreeNode child = node;
        child.push_back(n);
        parts.push_back(tree_term(t, child));
        prev = n;
    }
    parts.push_back(OrderTerm::omega(OrderTerm::atom()));
    parts.push_back(OrderTerm::atom());  // the infinity point
    return OrderTerm::sum(std::move(parts));
}

OrderTerm order_of_tree(const LabelTree& t) {
    t.validate();
    if (t.ill_founded())
        throw PreconditionFailed("order_of_tree: raw tree with promised branches; fatten first");
    return normalize(tree_term(t, TreeNode{}));
}

static OrderTerm fat_term(const LabelTree& skel, const TreeNode& node) {
    if (skel.promises.count(node)) return OrderTerm::dense();
    std::vector<int> members = skel.child_labels(node);
    if (members.empty())
        return OrderTerm::sum({OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom()});
    // Children cycle through the member list; each block is one child
    // subterm followed by the two atoms up to the next even pair.
    std::vector<OrderTerm> block;
    for (int n : members) {
        TreeNode child = node;
        child.push_back(n);
        block.push_back(fat_term(skel, child));
        block.push_back(OrderTerm::atom());
        block.push_back(OrderTerm::atom());
    }
    return OrderTerm::sum({OrderTerm::atom(), OrderTerm::omega(OrderTerm::sum(std::move(block))),
                           OrderTerm::atom()});
}

OrderTerm order_of_tree(const FattenedTree& t) {
    return normalize(fat_term(t.skeleton(), TreeNode{}));
}

// ---------------------------------------------------------------------------
// Rule compilation

namespace {

// The square-packing rule family lifted to the macro alphabet of one node:
// explicit patterns are the base-level packing patterns with A/B substituted
// (when they fit under the diameter bound); the dedicated checker parses a
// regular configuration and runs the full packing checker at macro level.
class MacroPackingRules : public RuleGenerator {
public:
    explicit MacroPackingRules(TreeNode sigma) : sigma_(std::move(sigma)) {
        j_ = static_cast<int>(macro_side(sigma_));
        A_ = render_macrosymbol(sigma_, Macro::A);
        B_ = render_macrosymbol(sigma_, Macro::B);
    }

    std::string name() const override { return "square-packing@" + node_to_text(sigma_); }

    std::vector<Pattern> enumerate(int d) const override {
        int dm = d / j_;
        if (dm < 4) return {};  // nothing expressible; the checker still applies
        std::vector<Pattern> out;
        for (const Pattern& p : PackingRules().enumerate(dm))
            out.push_back(substitute(p, A_, B_));
        return out;
    }

    std::vector<Violation> check(const PeriodicConfig& x, int) const override {
        for (int ay = 0; ay < j_; ++ay)
            for (int ax = 0; ax < j_; ++ax) {
                Cell g{ax, ay};
                if (!grid_regular(x, g, A_, B_, j_)) continue;
                SquareReport rep = f_check(macro_config(x, g, A_, j_));
                std::vector<Violation> out;
                for (Violation& v : rep.violations) {
                    v.rule = name() + ":" + v.rule;
                    v.pos = Cell{g.x + j_ * v.pos.x, g.y + j_ * v.pos.y};
                    out.push_back(std::move(v));
                }
                return out;
            }
        return {};  // not regular at this level: no packing constraint here
    }

private:
    TreeNode sigma_;
    int j_ = 1;
    Pattern A_, B_;

    friend class GridRule;
};

// The conditional grid rule of a node sigma = rho + (n, n+1): once x
// contains both an n-square and an (n+1)-square over {A_rho, B_rho} (the
// mixed type at level rho), an A_sigma and a B_sigma must appear, and every
// occurrence of A_sigma or B_sigma must have occurrences directly north,
// south, east and west at grid distance j_sigma — forcing the full grid.
// Configurations where the two trigger squares do not coexist are
// unrestricted.  Not expressible as a finite pattern list; checker only.
class GridRule : public RuleGenerator {
public:
    explicit GridRule(TreeNode sigma) : sigma_(std::move(sigma)) {
        TreeNode rho(sigma_.begin(), sigma_.end() - 1);
        int n = sigma_.back();
        Pattern pa = render_macrosymbol(rho, Macro::A);
        Pattern pb = render_macrosymbol(rho, Macro::B);
        j_ = static_cast<int>(macro_side(sigma_));
        A_ = render_macrosymbol(sigma_, Macro::A);
        B_ = render_macrosymbol(sigma_, Macro::B);
        C_ = substitute(make_square(n), pa, pb);      // the n-square trigger
        D_ = substitute(make_square(n + 1), pa, pb);  // the (n+1)-square trigger (= B_sigma)
    }

    std::string name() const override { return "grid-rule@" + node_to_text(sigma_); }

    std::vector<Pattern> enumerate(int) const override { return {}; }

    std::vector<Violation> check(const PeriodicConfig& x, int) const override {
        if (!appears_in(C_, x) || !appears_in(D_, x)) return {};
        std::vector<Violation> out;
        if (!appears_in(A_, x))
            out.push_back(Violation{Pattern{}, Cell{0, 0}, name() + ":missing-A"});
        for (int oy = 0; oy < x.height(); ++oy)
            for (int ox = 0; ox < x.width(); ++ox) {
                if (!occ(x, ox, oy)) continue;
                bool ok = occ(x, ox + j_, oy) && occ(x, ox - j_, oy) &&
                          occ(x, ox, oy + j_) && occ(x, ox, oy - j_);
                if (!ok)
                    out.push_back(Violation{
                        x.window(Rect{ox, oy, j_, j_}).shifted(-ox, -oy), Cell{ox, oy}, name()});
            }
        return out;
    }

private:
    bool occ(const PeriodicConfig& x, int ox, int oy) const {
        return block_is(x, ox, oy, A_, j_) || block_is(x, ox, oy, B_, j_);
    }

    TreeNode sigma_;
    int j_ = 1;
    Pattern A_, B_, C_, D_;
};

}  // namespace

ForbiddenSet compile_rules(const LabelTree& t, int d) {
    t.validate();
    if (d < 4) throw BoundTooSmall("compile_rules: need d >= 4 for the base packing rules");
    ForbiddenSet F;
    for (const TreeNode& sigma : t.nodes) {
        if (macro_side(sigma) > d && !sigma.empty()) continue;  // beyond desk scale at this bound
        if (sigma.empty()) {
            F.add_generator(std::make_shared<PackingRules>());
        } else {
            F.add_generator(std::make_shared<MacroPackingRules>(sigma));
            F.add_generator(std::make_shared<GridRule>(sigma));
        }
    }
    return F;
}

}  // namespace sft
