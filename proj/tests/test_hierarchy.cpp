#include "doctest.h"

#include "sft/hierarchy.hpp"

#include <random>

using namespace sft;

namespace {

LabelTree make_tree(std::vector<TreeNode> nodes) {
    LabelTree t;
    for (TreeNode& n : nodes) t.nodes.insert(std::move(n));
    return t;
}

TypeString nat(TreeNode p, int n) { return {std::move(p), TypeString::Terminal::Nat, n}; }
TypeString pairt(TreeNode p, int n) { return {std::move(p), TypeString::Terminal::Pair, n}; }
TypeString inft(TreeNode p) { return {std::move(p), TypeString::Terminal::Inf, 0}; }

OrderTerm w_plus(int k) {  // omega + k extra points
    std::vector<OrderTerm> parts{OrderTerm::omega(OrderTerm::atom())};
    for (int i = 0; i < k; ++i) parts.push_back(OrderTerm::atom());
    return OrderTerm::sum(std::move(parts));
}

}  // namespace

TEST_CASE("type successors walk the universe in order") {
    LabelTree t = make_tree({{}, {1}, {1, 0}, {3}});
    std::vector<TypeString> u = types_universe(t, 5);
    for (size_t i = 0; i + 1 < u.size(); ++i) {
        if (u[i].marker()) continue;
        if (u[i + 1].marker()) {
            // Truncation marker: the untruncated successor continues the
            // block instead of jumping to its limit.
            std::optional<TypeString> s = type_successor(t, u[i]);
            REQUIRE(s.has_value());
            CHECK(u[i] < *s);
            CHECK(*s < u[i + 2]);
        } else {
            CHECK(type_successor(t, u[i]) == std::optional<TypeString>(u[i + 1]));
        }
    }
    CHECK_FALSE(type_successor(t, inft({})).has_value());
    CHECK_THROWS_AS(type_successor(t, pairt({}, 1)), PreconditionFailed);  // member slot
    CHECK_THROWS_AS(
        type_successor(t, TypeString{{}, TypeString::Terminal::OmegaTail, 0}),
        PreconditionFailed);
}

TEST_CASE("base pair verdicts follow the size table and block separation") {
    LabelTree lam = make_tree({{}});
    CHECK(pair_verdict(lam, nat({}, 1), nat({}, 1)).verdict == PairKind::EntropyOrEqual);
    CHECK(pair_verdict(lam, nat({}, 1), nat({}, 2)).verdict == PairKind::EntropyOrEqual);
    CHECK(pair_verdict(lam, nat({}, 1), pairt({}, 1)).verdict == PairKind::EntropyOrEqual);
    CHECK(pair_verdict(lam, pairt({}, 1), pairt({}, 2)).verdict == PairKind::EntropyOrEqual);
    CHECK(pair_verdict(lam, nat({}, 1), nat({}, 3)).verdict == PairKind::NotPair);
    PairVerdict sep = pair_verdict(lam, nat({}, 1), inft({}));
    CHECK(sep.verdict == PairKind::NotPair);
    CHECK(sep.justification == "type-separation");

    LabelTree t12 = make_tree({{}, {1}});
    // The (1,2) block with its limit point separates sizes 1 and 2.
    PairVerdict v = pair_verdict(t12, nat({}, 1), nat({}, 2));
    CHECK(v.verdict == PairKind::NotPair);
    CHECK(v.justification == "type-separation");
    // Lexicographic successors connect through shared representatives:
    // the tightest possible packing bridges into the child block...
    CHECK(pair_verdict(t12, nat({}, 1), nat({1}, 0)).verdict ==
          PairKind::ConnectableViaRepresentatives);
    // ...and the child block's limit bridges back out.
    CHECK(pair_verdict(t12, inft({1}), nat({}, 2)).verdict ==
          PairKind::ConnectableViaRepresentatives);
    CHECK(pair_verdict(t12, nat({1}, 0), nat({1}, 1)).verdict == PairKind::EntropyOrEqual);
    CHECK(pair_verdict(t12, nat({1}, 0), nat({}, 2)).verdict == PairKind::NotPair);
    CHECK(infinitely_separated(t12, nat({}, 0), inft({})));
    CHECK(infinitely_separated(t12, nat({1}, 3), nat({}, 2)));
    CHECK_FALSE(infinitely_separated(t12, nat({1}, 3), nat({1}, 40)));

    auto pred = base_pairs(t12);
    CHECK(pred(nat({}, 1), nat({}, 2)).verdict == PairKind::NotPair);
    CHECK_THROWS_AS(pred(pairt({}, 1), nat({}, 0)), PreconditionFailed);
}

TEST_CASE("hierarchy ranks of hand-traced orders") {
    auto rank_of = [](const OrderTerm& t) {
        HierarchyResult r = run_hierarchy(t);
        REQUIRE(r.has_tcpe);
        return r.rank.as_nat();
    };
    CHECK(rank_of(OrderTerm::atom()) == 1);
    CHECK(rank_of(OrderTerm::sum({OrderTerm::atom(), OrderTerm::atom()})) == 1);
    CHECK(rank_of(OrderTerm::sum(
              {OrderTerm::atom(), OrderTerm::atom(), OrderTerm::atom()})) == 2);
    CHECK(rank_of(OrderTerm::omega(OrderTerm::atom())) == 2);
    CHECK(rank_of(w_plus(1)) == 3);   // one limit point: closure saturates
    CHECK(rank_of(w_plus(2)) == 4);   // a point beyond the limit needs one more step
    CHECK(rank_of(OrderTerm::sum({OrderTerm::omega(OrderTerm::atom()),
                                  OrderTerm::omega(OrderTerm::atom())})) == 4);
    OrderTerm w2 = OrderTerm::omega(OrderTerm::omega(OrderTerm::atom()));
    CHECK(rank_of(w2) == 4);
    CHECK(rank_of(OrderTerm::sum({w2, OrderTerm::atom()})) == 5);

    HierarchyResult odd = run_hierarchy(w_plus(1));
    CHECK(odd.parity == HierarchyResult::Parity::Odd);
    HierarchyResult even = run_hierarchy(w_plus(2));
    CHECK(even.parity == HierarchyResult::Parity::Even);

    HierarchyResult dense = run_hierarchy(OrderTerm::dense());
    CHECK_FALSE(dense.has_tcpe);
    CHECK_THROWS_AS(run_hierarchy(w2, 1), ResourceLimit);
    CHECK_THROWS_AS(initial_relation(OrderTerm::omega_star(OrderTerm::atom())),
                    PreconditionFailed);
}

TEST_CASE("trace is deterministic, alternating, and monotone") {
    OrderTerm t = OrderTerm::sum({OrderTerm::omega(w_plus(3)), OrderTerm::atom(),
                                  OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom()});
    HierarchyResult a = run_hierarchy(t);
    HierarchyResult b = run_hierarchy(t);
    REQUIRE(a.has_tcpe);
    CHECK(a.rank == b.rank);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].stage == b.trace[i].stage);
        CHECK(a.trace[i].classes == b.trace[i].classes);
        CHECK(a.trace[i].stage == static_cast<int>(i) + 1);
        StageInfo::Kind expect = i == 0 ? StageInfo::Kind::Base
                                 : (i % 2 == 1 ? StageInfo::Kind::Transitive
                                               : StageInfo::Kind::Closure);
        CHECK(a.trace[i].kind == expect);
    }
    // Finite class counts never increase along the trace.
    long long last = -1;
    for (const StageInfo& s : a.trace) {
        if (s.classes >= 0 && last >= 0) CHECK(s.classes <= last);
        if (s.classes >= 0) last = s.classes;
    }
    CHECK(a.trace.back().classes == 1);
}

TEST_CASE("tree ranks: the two reference shifts and ill-founded trees") {
    HierarchyResult base = run_hierarchy(make_tree({{}}));
    REQUIRE(base.has_tcpe);
    CHECK(base.rank == Ordinal::nat(3));
    CHECK(base.parity == HierarchyResult::Parity::Odd);

    HierarchyResult split = run_hierarchy(make_tree({{}, {1}}));
    REQUIRE(split.has_tcpe);
    CHECK(split.rank == Ordinal::nat(4));
    CHECK(split.parity == HierarchyResult::Parity::Even);
    // Stage 2 has three classes: below the (1,2) block's limit, from that
    // limit up to the top, and the top point itself.
    REQUIRE(split.trace.size() >= 2);
    CHECK(split.trace[1].stage == 2);
    CHECK(split.trace[1].classes == 3);

    LabelTree ill = tree_from_text("()\n(0,1)\n* (0,1)\n");
    HierarchyResult no = run_hierarchy(ill);
    CHECK_FALSE(no.has_tcpe);
    CHECK_FALSE(no.note.empty());
}

TEST_CASE("fat-tree law: skeleton rank r gives 2(r+1)-1, prefixed gives 2(r+1)") {
    LabelTree chain = make_tree({{}});
    TreeNode node;
    for (int r = 1; r <= 4; ++r) {
        REQUIRE(tree_rank(chain).rank == Ordinal::nat(static_cast<std::uint64_t>(r)));
        OrderTerm fat = order_of_tree(fatten(chain));
        HausdorffRank h = hausdorff_rank(fat);
        REQUIRE(h.scattered);
        CHECK(h.rank == Ordinal::nat(static_cast<std::uint64_t>(r + 1)));
        HierarchyResult hr = run_hierarchy(fatten(chain));
        REQUIRE(hr.has_tcpe);
        CHECK(hr.rank == Ordinal::nat(static_cast<std::uint64_t>(2 * (r + 1) - 1)));
        CHECK(hr.parity == HierarchyResult::Parity::Odd);
        // Grafting the fat tree under a (0,1) child of a fresh root appends
        // the root's own block after it, forcing one extra transitive step.
        OrderTerm prefixed =
            OrderTerm::sum({OrderTerm::atom(), fat,
                            OrderTerm::omega(OrderTerm::atom()), OrderTerm::atom()});
        HierarchyResult pr = run_hierarchy(prefixed);
        REQUIRE(pr.has_tcpe);
        CHECK(pr.rank == Ordinal::nat(static_cast<std::uint64_t>(2 * (r + 1))));
        CHECK(pr.parity == HierarchyResult::Parity::Even);
        node.push_back(0);
        chain.nodes.insert(node);
    }
    // A branching skeleton follows the same law.
    LabelTree bush = make_tree({{}, {0}, {2}, {2, 0}});
    CHECK(run_hierarchy(fatten(bush)).rank == Ordinal::nat(7));
}

TEST_CASE("engine partitions match the derivative partitions on finite trees") {
    for (const LabelTree& t : {make_tree({{}}), make_tree({{}, {1}}),
                               make_tree({{}, {0}, {0, 0}, {2}}),
                               make_tree({{}, {0}, {1}, {1, 2}, {1, 4}, {3}})}) {
        CrosscheckReport rep = crosscheck_h(t);
        CHECK(rep.ok);
        CHECK(rep.stages >= 1);

        // Independent count: stage 2 fuses everything between consecutive
        // block limits, so its class count is (number of nodes) + 1.
        TypeRelation r = transitive_step(initial_relation(order_of_tree(t)));
        CHECK(class_count(r.classes) == static_cast<long long>(t.nodes.size()) + 1);
    }
    CrosscheckReport ill = crosscheck_h(tree_from_text("()\n* ()\n"));
    CHECK_FALSE(ill.ok);
}

TEST_CASE("rank and condensation rank satisfy r in {2b-1, 2b} on random trees") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> lbl(0, 4), extra(0, 3);
    for (int i = 0; i < 120; ++i) {
        LabelTree t = make_tree({{}});
        int n = extra(rng) + extra(rng);
        std::vector<TreeNode> pool{{}};
        for (int k = 0; k < n; ++k) {
            TreeNode parent = pool[static_cast<size_t>(rng() % pool.size())];
            parent.push_back(lbl(rng));
            t.nodes.insert(parent);
            pool.push_back(parent);
        }
        std::uint64_t r = run_hierarchy(t).rank.as_nat();
        std::uint64_t b = hausdorff_rank(order_of_tree(t)).rank.as_nat();
        CHECK(r >= 2 * b - 1);
        CHECK(r <= 2 * b);
        CHECK(crosscheck_h(t).ok);

        std::uint64_t rf = run_hierarchy(fatten(t)).rank.as_nat();
        std::uint64_t bf = hausdorff_rank(order_of_tree(fatten(t))).rank.as_nat();
        CHECK(rf >= 2 * bf - 1);
        CHECK(rf <= 2 * bf);
    }
}
