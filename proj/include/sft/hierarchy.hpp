#ifndef SFT_HIERARCHY_HPP
#define SFT_HIERARCHY_HPP

// The alternating transitivity/closure hierarchy on the symbolic type space
// of a tree shift, and its rank.
//
// Stage 1 is the base pair relation on types (same type; neighbouring sizes;
// lexicographic successors connect via shared representatives; types
// separated by a whole infinite block never connect).  Even stages take the
// transitive closure, odd stages the order-topological closure.  On the
// symbolic order this alternation computes iterated finite condensations:
// the stage-2k partition is exactly the k-th condensation of the type order,
// so the engine runs on flagged interval classes of the order term.  The
// rank is the least stage with a single class; it is odd exactly when the
// closure step alone already connects everything at the end, which happens
// precisely when the second-to-last partition is (big class without a
// greatest element) + (singleton limit point).

#include "sft/orders.hpp"
#include "sft/trees.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sft {

// ---------------------------------------------------------------------------
// Base pair relation on types

enum class PairKind { EntropyOrEqual, ConnectableViaRepresentatives, NotPair };

struct PairVerdict {
    TypeString a, b;
    PairKind verdict = PairKind::NotPair;
    std::string justification;  // short tag naming the applied case
};

// The stage-1 relation.  Throws PreconditionFailed on marker type strings
// (OmegaTail / Path) or types not in the universe of t.
PairVerdict pair_verdict(const LabelTree& t, const TypeString& a, const TypeString& b);
std::function<PairVerdict(const TypeString&, const TypeString&)> base_pairs(const LabelTree& t);

// The lexicographic successor of a concrete type in the universe of t, or
// nullopt for the top type.
std::optional<TypeString> type_successor(const LabelTree& t, const TypeString& a);
// True iff some block-limit type (prefix + infinity) x satisfies a < x <= b;
// such a and b are separated by infinitely many types.
bool infinitely_separated(const LabelTree& t, const TypeString& a, const TypeString& b);

// ---------------------------------------------------------------------------
// Partitions into flagged interval classes

// One interval class of the original order, with just enough content
// information for the closure analysis: whether the class contains its
// endpoints and whether it is a single original point.
struct HClass {
    bool has_min = true;
    bool has_max = true;
    bool singleton = true;
    friend bool operator==(const HClass&, const HClass&) = default;
};

// The quotient order of a partition: classes in order, with omega-blocks
// kept symbolic (all copies share one description).
struct ClassTerm {
    enum class Kind { Cls, Sum, Omega };
    Kind kind = Kind::Cls;
    HClass cls;                     // Cls only
    std::vector<ClassTerm> children;

    static ClassTerm leaf(HClass c) { return ClassTerm{Kind::Cls, c, {}}; }
    static ClassTerm sum(std::vector<ClassTerm> parts) {
        return ClassTerm{Kind::Sum, {}, std::move(parts)};
    }
    static ClassTerm omega(ClassTerm body) { return ClassTerm{Kind::Omega, {}, {std::move(body)}}; }
    friend bool operator==(const ClassTerm&, const ClassTerm&) = default;
};

struct StageInfo {
    enum class Kind { Base, Transitive, Closure };
    int stage = 1;
    Kind kind = Kind::Base;
    long long classes = -1;  // -1: infinitely many
};

struct TypeRelation {
    ClassTerm classes;
    int stage = 2;                // the even stage this partition realizes
    std::vector<StageInfo> log;
};

// The discrete partition of an order term: every point its own class.
// Rejects terms containing Dense or OmegaStar parts.
TypeRelation initial_relation(const OrderTerm& t);
// One transitive-closure stage: fuses classes at finite distance in the
// quotient order (one finite-condensation step with flag bookkeeping).
TypeRelation transitive_step(const TypeRelation& r);

long long class_count(const ClassTerm& c);     // -1 when infinite
OrderTerm erase_flags(const ClassTerm& c);     // quotient order as a plain term

// ---------------------------------------------------------------------------
// Rank extraction

struct HierarchyResult {
    bool has_tcpe = true;
    Ordinal rank;                  // valid when has_tcpe
    enum class Parity { Odd, Even } parity = Parity::Odd;
    std::vector<StageInfo> trace;
    std::string note;
};

// Iterates the hierarchy on a symbolic order term until one class remains.
// Dense parts (chains of types ordered like the rationals) mean no stage
// ever saturates: has_tcpe = false.  Throws ResourceLimit if the rank
// exceeds max_steps stages.
HierarchyResult run_hierarchy(const OrderTerm& t, int max_steps = 64);
// On the type order of a tree; trees with promised infinite branches are
// fattened first (their path types are dense, so the verdict is no-TCPE).
HierarchyResult run_hierarchy(const LabelTree& t, int max_steps = 64);
HierarchyResult run_hierarchy(const FattenedTree& t, int max_steps = 64);

// ---------------------------------------------------------------------------
// Cross-validation

struct CrosscheckReport {
    bool ok = true;
    int stages = 0;        // compared derivative steps
    std::string detail;    // first discrepancy, or a per-stage summary
};

// Compares, for every beta up to stabilization, the engine's stage-2beta
// partition with the beta-th finite-condensation derivative of the tree's
// order term (two independent code paths over the same order).
CrosscheckReport crosscheck_h(const LabelTree& t, int max_steps = 64);

}  // namespace sft

#endif  // SFT_HIERARCHY_HPP
