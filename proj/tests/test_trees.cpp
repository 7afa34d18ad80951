#include "doctest.h"

#include "sft/squares.hpp"
#include "sft/trees.hpp"

#include <algorithm>
#include <random>
#include <sstream>

using namespace sft;

namespace {

LabelTree make_tree(std::vector<TreeNode> nodes, TreeFlavor flavor = TreeFlavor::Omega) {
    LabelTree t;
    t.flavor = flavor;
    for (TreeNode& n : nodes) t.nodes.insert(std::move(n));
    return t;
}

// A periodic configuration tiling the plane with copies of `tile` (side s),
// anchored at (ox, oy).
PeriodicConfig tiled(const Pattern& tile, int s, int ox, int oy) {
    PeriodicConfig x = PeriodicConfig::uniform(s, s, 0);
    for (int y = 0; y < s; ++y)
        for (int xx = 0; xx < s; ++xx) {
            int u = ((xx - ox) % s + s) % s;
            int v = ((y - oy) % s + s) % s;
            x.set(xx, y, tile.at(Cell{u, v}));
        }
    return x;
}

void stamp(PeriodicConfig& x, const Pattern& p, int ox, int oy) {
    const auto& cells = p.cells();
    for (const auto& [c, s] : cells) x.set(c.x + ox, c.y + oy, s);
}

}  // namespace

TEST_CASE("tree text format round-trips and validates") {
    LabelTree t = tree_from_text("()\n(1,2)\n(1,2)(0,1)\n(3,4)\n");
    CHECK(t.nodes.size() == 4);
    CHECK(t.contains({1, 0}));
    CHECK(t.flavor == TreeFlavor::Omega);
    CHECK(t.child_labels({}) == std::vector<int>{1, 3});
    CHECK(t.child_labels({1}) == std::vector<int>{0});
    CHECK(tree_from_text(tree_to_text(t)).nodes == t.nodes);

    LabelTree even = tree_from_text("()\n(2,3)\n(0,1)\n");
    CHECK(even.flavor == TreeFlavor::TwoOmega);
    CHECK(tree_from_text("flavor omega\n()\n(2,3)\n").flavor == TreeFlavor::Omega);

    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    CHECK(ill.ill_founded());
    CHECK(ill.promises.count({0}) == 1);
    CHECK(tree_from_text(tree_to_text(ill)).promises == ill.promises);

    CHECK_THROWS(tree_from_text("()\n(1,3)\n"));          // not (n,n+1)
    CHECK_THROWS(tree_from_text("()\n(0,1)(0,1)\n"));     // missing parent
    CHECK_THROWS(tree_from_text("flavor 2omega\n()\n(1,2)\n"));  // odd label
    CHECK_THROWS(tree_from_text("(1,2)\n"));              // missing root
}

TEST_CASE("macro side is the product of label plus three") {
    CHECK(macro_side({}) == 1);
    CHECK(macro_side({2}) == 5);
    CHECK(macro_side({2, 3}) == 30);
    CHECK(macro_side({0, 0, 0}) == 27);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> lbl(0, 4), len(0, 4);
    for (int i = 0; i < 50; ++i) {
        TreeNode sigma;
        long long expect = 1;
        for (int k = len(rng); k > 0; --k) {
            int n = 2 * lbl(rng);  // even labels
            sigma.push_back(n);
            expect *= n + 3;
        }
        CHECK(macro_side(sigma) == expect);
        CHECK(macro_side(sigma) % 2 == 1);  // product of odd factors
    }
    CHECK_THROWS_AS(macro_side(TreeNode(50, 100)), ResourceLimit);
}

TEST_CASE("macrosymbol rendering matches the recursive layout") {
    Pattern a0 = render_macrosymbol({}, Macro::A);
    Pattern b0 = render_macrosymbol({}, Macro::B);
    CHECK(a0.at(Cell{0, 0}) == 0);
    CHECK(b0.at(Cell{0, 0}) == 1);
    CHECK(a0.size() == 1);

    // B_(2,3) is a 3-square; A_(2,3) is a 2-square plus top row / right
    // column of 1s.  Both of side 5.
    CHECK(render_macrosymbol({2}, Macro::B) == make_square(3));
    Pattern a = render_macrosymbol({2}, Macro::A);
    CHECK(a.bbox() == Rect{0, 0, 5, 5});
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            int expect;
            if (y == 4 || x == 4) expect = 1;             // top row, right column
            else if (y == 0 || x == 0 || y == 3 || x == 3) expect = 0;  // square ring
            else expect = 1;                              // square interior
            CHECK(a.at(Cell{x, y}) == expect);
        }

    // One level deeper: side multiplies, and the pattern decomposes into
    // parent blocks laid out as an (n+1)-square.
    TreeNode sigma{0, 1};  // (0,1)(1,2): j = 3 * 4 = 12
    Pattern b = render_macrosymbol(sigma, Macro::B);
    CHECK(b.bbox() == Rect{0, 0, 12, 12});
    Pattern pa = render_macrosymbol({0}, Macro::A);
    Pattern pb = render_macrosymbol({0}, Macro::B);
    Pattern layout = make_square(2);  // the (n+1)-square layout, n = 1
    for (int v = 0; v < 4; ++v)
        for (int u = 0; u < 4; ++u) {
            const Pattern& expect = layout.at(Cell{u, v}) == 0 ? pa : pb;
            for (int dy = 0; dy < 3; ++dy)
                for (int dx = 0; dx < 3; ++dx)
                    CHECK(b.at(Cell{3 * u + dx, 3 * v + dy}) == expect.at(Cell{dx, dy}));
        }
}

TEST_CASE("type strings order lexicographically under 0 < (0,1) < 1 < ... < inf") {
    using T = TypeString;
    using K = TypeString::Terminal;
    T one{{}, K::Nat, 1}, two{{}, K::Nat, 2}, inf{{}, K::Inf, 0};
    T p12_0{{1}, K::Nat, 0}, p12_inf{{1}, K::Inf, 0}, p12_tail{{1}, K::OmegaTail, 0};
    CHECK(one < p12_0);
    CHECK(p12_0 < p12_tail);
    CHECK(p12_tail < p12_inf);
    CHECK(p12_inf < two);
    CHECK(two < inf);
    CHECK(to_string(p12_inf) == "(1,2)inf");
    CHECK(to_string(one) == "1");
    CHECK(to_string(T{{1}, K::Pair, 0}) == "(1,2)(0,1)");
    CHECK(to_string(T{{}, K::OmegaTail, 0}) == "...");
}

TEST_CASE("types universe splices child blocks in order") {
    LabelTree lam = make_tree({{}});
    std::vector<TypeString> u = types_universe(lam, 3);
    REQUIRE(u.size() == 10);  // 0 (0,1) 1 (1,2) 2 (2,3) 3 (3,4) ... inf
    CHECK(u.front() == TypeString{{}, TypeString::Terminal::Nat, 0});
    CHECK(u[1] == TypeString{{}, TypeString::Terminal::Pair, 0});
    CHECK(u[u.size() - 2].terminal == TypeString::Terminal::OmegaTail);
    CHECK(u.back().terminal == TypeString::Terminal::Inf);
    CHECK(std::is_sorted(u.begin(), u.end()));

    LabelTree t12 = make_tree({{}, {1}});
    std::vector<TypeString> v = types_universe(t12, 2);
    CHECK(std::is_sorted(v.begin(), v.end()));
    // The (1,2) slot is replaced by the child's whole block.
    auto it = std::find(v.begin(), v.end(), TypeString{{1}, TypeString::Terminal::Nat, 0});
    REQUIRE(it != v.end());
    CHECK(*(it - 1) == TypeString{{}, TypeString::Terminal::Nat, 1});
    auto ie = std::find(v.begin(), v.end(), TypeString{{1}, TypeString::Terminal::Inf, 0});
    REQUIRE(ie != v.end());
    CHECK(*(ie + 1) == TypeString{{}, TypeString::Terminal::Nat, 2});
    // No (1,2) pair terminal at the root: it is a member.
    CHECK(std::find(v.begin(), v.end(), TypeString{{}, TypeString::Terminal::Pair, 1}) == v.end());

    // Sort oracle: shuffling and sorting reproduces the emitted order.
    LabelTree nested = make_tree({{}, {0}, {0, 0}, {2}});
    std::vector<TypeString> w = types_universe(nested, 4);
    CHECK(std::is_sorted(w.begin(), w.end()));
    std::vector<TypeString> shuffled = w;
    std::mt19937 rng(17);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == w);

    // Promised branches appear as symbolic path markers.
    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    std::vector<TypeString> p = types_universe(ill, 2);
    auto ip = std::find_if(p.begin(), p.end(), [](const TypeString& s) {
        return s.terminal == TypeString::Terminal::Path;
    });
    REQUIRE(ip != p.end());
    CHECK(ip->prefix == TreeNode{0});
    CHECK(std::is_sorted(p.begin(), p.end()));
}

TEST_CASE("tree ranks: leaves 1, chains add, promises are ill-founded") {
    CHECK(tree_rank(make_tree({{}})).rank == Ordinal::nat(1));
    CHECK(tree_rank(make_tree({{}, {0}})).rank == Ordinal::nat(2));
    CHECK(tree_rank(make_tree({{}, {0}, {0, 0}, {1}})).rank == Ordinal::nat(3));
    CHECK(tree_rank(make_tree({{}, {0}, {0, 0}, {1}}), {1}).rank == Ordinal::nat(1));
    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    CHECK_FALSE(tree_rank(ill).well_founded);
    CHECK_FALSE(tree_rank(ill, {0}).well_founded);
    CHECK_THROWS_AS(tree_rank(make_tree({{}}), {5}), PreconditionFailed);
}

TEST_CASE("fattened trees cycle the child list and preserve ranks") {
    LabelTree chain = make_tree({{}, {0}, {0, 1}}, TreeFlavor::Omega);
    FattenedTree f = fatten(chain);
    CHECK(f.contains({}));
    CHECK(f.contains({0}));
    CHECK(f.contains({4, 2}));          // any even codes walk the chain
    CHECK_FALSE(f.contains({1}));       // odd label
    CHECK_FALSE(f.contains({0, 0, 0})); // deeper than the chain
    CHECK(f.decode({6, 0}) == TreeNode{0, 1});
    CHECK(f.rank_of({}).rank == Ordinal::nat(3));
    CHECK(f.rank_of({2}).rank == Ordinal::nat(2));
    CHECK(f.rank_of({2, 8}).rank == Ordinal::nat(1));

    // Two children: codes alternate between them.
    LabelTree two = make_tree({{}, {1}, {3}, {3, 0}});
    FattenedTree g = fatten(two);
    CHECK(g.decode({0}) == TreeNode{1});
    CHECK(g.decode({2}) == TreeNode{3});
    CHECK(g.decode({4}) == TreeNode{1});
    CHECK(g.decode({2, 0}) == TreeNode{3, 0});
    CHECK_FALSE(g.contains({0, 0}));  // the label-1 child is a leaf

    // A promise admits arbitrary continuations and stays ill-founded.
    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    FattenedTree h = fatten(ill);
    CHECK(h.contains({0, 2, 4, 6, 100}));
    CHECK_FALSE(h.rank_of({0, 2, 4}).well_founded);
}

TEST_CASE("order terms of trees and fattened trees") {
    // T = {root}: omega + 1, Hausdorff rank 2.
    OrderTerm lam = order_of_tree(make_tree({{}}));
    CHECK(lam == OrderTerm::sum({OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom()}));
    CHECK(hausdorff_rank(lam).rank == Ordinal::nat(2));

    // T = {root,(1,2)}: an omega+1 block spliced into one interior point.
    OrderTerm t12 = order_of_tree(make_tree({{}, {1}}));
    std::vector<OrderTerm> expect{OrderTerm::atom(), OrderTerm::atom(), OrderTerm::atom(),
                                  OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom(),
                                  OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom()};
    CHECK(t12 == OrderTerm::sum(std::move(expect)));
    CHECK(hausdorff_rank(t12).rank == Ordinal::nat(2));

    // Raw ill-founded trees are rejected; fattened ones go dense.
    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    CHECK_THROWS_AS(order_of_tree(ill), PreconditionFailed);
    OrderTerm fat_ill = order_of_tree(fatten(ill));
    CHECK(contains_dense(fat_ill));
    CHECK_FALSE(hausdorff_rank(fat_ill).scattered);

    // Fat-tree law: fattened skeletons of rank 1..4 have Hausdorff rank +1.
    LabelTree chain = make_tree({{}});
    TreeNode node;
    for (int r = 1; r <= 4; ++r) {
        CHECK(tree_rank(chain).rank == Ordinal::nat(r));
        HausdorffRank h = hausdorff_rank(order_of_tree(fatten(chain)));
        REQUIRE(h.scattered);
        CHECK(h.rank == Ordinal::nat(r + 1));
        node.push_back(0);
        chain.nodes.insert(node);
    }

    // A branching skeleton: rank 3 via two children of ranks 1 and 2.
    LabelTree bush = make_tree({{}, {0}, {2}, {2, 0}});
    CHECK(tree_rank(bush).rank == Ordinal::nat(3));
    CHECK(hausdorff_rank(order_of_tree(fatten(bush))).rank == Ordinal::nat(4));
}

TEST_CASE("type_of classifies periodic configurations") {
    LabelTree t = make_tree({{}, {2}});  // T = {root, (2,3)}

    CHECK(type_of(PeriodicConfig::uniform(3, 3, 1), t).type ==
          TypeString{{}, TypeString::Terminal::Inf, 0});
    CHECK(type_of(PeriodicConfig::uniform(4, 4, 0), t).type ==
          TypeString{{}, TypeString::Terminal::Nat, 0});

    // Tight 3-squares = an all-B grid at (2,3): subtype (2,3)inf.
    PeriodicConfig tight3 = tiled(make_square(3), 5, 0, 0);
    TypeResult r = type_of(tight3, t);
    CHECK(r.type == TypeString{{2}, TypeString::Terminal::Inf, 0});
    REQUIRE(r.alignment.size() == 1);
    CHECK(r.alignment[0] == Cell{0, 0});

    // The same grid shifted: alignment moves with it.
    TypeResult rs = type_of(tiled(make_square(3), 5, 2, 1), t);
    CHECK(rs.type == TypeString{{2}, TypeString::Terminal::Inf, 0});
    CHECK(rs.alignment[0] == Cell{2, 1});

    // An irregular pure-3 packing (gap lines): deepest regular node is the
    // root, type 3.
    PeriodicConfig gap3 = PeriodicConfig::uniform(6, 6, 1);
    stamp(gap3, make_square(3), 0, 0);
    TypeResult g = type_of(gap3, t);
    CHECK(g.type == TypeString{{}, TypeString::Terminal::Nat, 3});

    // A grid of A_(2,3): subtype (2,3)0.
    PeriodicConfig gridA = tiled(render_macrosymbol({2}, Macro::A), 5, 0, 0);
    CHECK(type_of(gridA, t).type == TypeString{{2}, TypeString::Terminal::Nat, 0});

    // Mixed 2-/3-squares in a regular grid: type (2,3) is a member, so the
    // parse descends and reads the macro mixed type below it... a checker
    // window of A and B blocks alternating gives macro type (0,1)-squares?
    // Simplest mixed macro: alternate A and B columns -> macro config of
    // vertical 1-stripes, which has no finite macro squares: subtype
    // (2,3)inf as well.  Covered by f_check elsewhere; here check rejection:
    // coexisting 1- and 3-squares violate the packing rules.
    PeriodicConfig bad = PeriodicConfig::uniform(12, 8, 1);
    stamp(bad, make_square(3), 0, 0);
    stamp(bad, make_square(1), 7, 2);
    CHECK_THROWS_AS(type_of(bad, t), PreconditionFailed);
}

TEST_CASE("compiled rules: base family at the root, conditional grid rule above") {
    LabelTree lam = make_tree({{}});
    ForbiddenSet f0 = compile_rules(lam, 6);
    CHECK(f0.generators().size() == 1);
    CHECK(f0.enumerate(6) == PackingRules().enumerate(6));

    LabelTree t = make_tree({{}, {1}});  // T = {root, (1,2)}
    ForbiddenSet f = compile_rules(t, 16);
    CHECK(f.generators().size() == 3);

    // Legal pure packings pass.
    CHECK(violates(f, tiled(make_square(1), 3, 0, 0), 16).empty());
    CHECK(violates(f, tiled(make_square(2), 4, 0, 0), 16).empty());
    CHECK(violates(f, PeriodicConfig::uniform(2, 2, 1), 16).empty());

    // Regular mixed placement: a grid of A_(1,2) and B_(1,2) blocks passes.
    Pattern mixed;
    Pattern a = render_macrosymbol({1}, Macro::A), b = render_macrosymbol({1}, Macro::B);
    for (const auto& [c, s] : a.cells()) mixed.set(c, s);
    for (const auto& [c, s] : b.cells()) mixed.set(Cell{c.x + 4, c.y}, s);
    PeriodicConfig reg(8, 4, std::vector<int>(32, 0));
    for (const auto& [c, s] : mixed.cells()) reg.set(c.x, c.y, s);
    CHECK(violates(f, reg, 16).empty());

    // Irregular mixed placement: 1- and 2-squares coexist off-grid.
    PeriodicConfig irr = PeriodicConfig::uniform(9, 8, 1);
    stamp(irr, make_square(2), 0, 0);
    stamp(irr, make_square(1), 5, 2);
    std::vector<Violation> v = violates(f, irr, 16);
    REQUIRE_FALSE(v.empty());
    bool grid_tagged = std::any_of(v.begin(), v.end(), [](const Violation& w) {
        return w.rule.find("grid-rule") != std::string::npos;
    });
    CHECK(grid_tagged);

    // A pure 1-square packing with irregular spacing is untouched by the
    // conditional rule (no 2-square trigger).
    PeriodicConfig sparse = PeriodicConfig::uniform(7, 4, 1);
    stamp(sparse, make_square(1), 0, 0);
    stamp(sparse, make_square(1), 4, 1);
    for (const Violation& w : violates(f, sparse, 16))
        CHECK(w.rule.find("grid-rule") == std::string::npos);

    // Monotone in the tree: every generator name of the smaller family
    // appears in the larger one.
    ForbiddenSet f2 = compile_rules(make_tree({{}, {1}, {3}}), 24);
    for (const auto& g : f.generators()) {
        bool found = std::any_of(f2.generators().begin(), f2.generators().end(),
                                 [&](const auto& h) { return h->name() == g->name(); });
        CHECK(found);
    }
}
