#include "sft/hierarchy.hpp"

#include <algorithm>
#include <sstream>

namespace sft {

// ---------------------------------------------------------------------------
// Base pair relation

namespace {

bool valid_concrete_type(const LabelTree& t, const TypeString& a) {
    if (a.marker()) return false;
    if (!t.contains(a.prefix)) return false;
    if (a.terminal == TypeString::Terminal::Pair) {
        // A pair type (n, n+1) only exists when the node prefix+(n,n+1) is
        // absent; otherwise that slot is the child's whole block.
        TreeNode child = a.prefix;
        child.push_back(a.t);
        if (t.contains(child)) return false;
    }
    if (a.terminal != TypeString::Terminal::Inf && a.t < 0) return false;
    return true;
}

void require_concrete(const LabelTree& t, const TypeString& a) {
    if (!valid_concrete_type(t, a))
        throw PreconditionFailed("pair_verdict: '" + to_string(a) +
                                 "' is not a concrete type of the tree");
}

}  // namespace

std::optional<TypeString> type_successor(const LabelTree& t, const TypeString& a) {
    require_concrete(t, a);
    switch (a.terminal) {
    case TypeString::Terminal::Nat: {
        TreeNode child = a.prefix;
        child.push_back(a.t);
        if (t.contains(child))
            return TypeString{std::move(child), TypeString::Terminal::Nat, 0};
        return TypeString{a.prefix, TypeString::Terminal::Pair, a.t};
    }
    case TypeString::Terminal::Pair:
        return TypeString{a.prefix, TypeString::Terminal::Nat, a.t + 1};
    case TypeString::Terminal::Inf: {
        if (a.prefix.empty()) return std::nullopt;  // global top
        TreeNode parent(a.prefix.begin(), a.prefix.end() - 1);
        return TypeString{std::move(parent), TypeString::Terminal::Nat, a.prefix.back() + 1};
    }
    default:
        throw PreconditionFailed("type_successor: marker type");
    }
}

bool infinitely_separated(const LabelTree& t, const TypeString& a, const TypeString& b) {
    const TypeString& lo = a < b ? a : b;
    const TypeString& hi = a < b ? b : a;
    if (lo == hi) return false;
    // A block limit (prefix + infinity) inside (lo, hi] has infinitely many
    // finite types of its block directly below it, all inside the interval.
    for (const TreeNode& node : t.nodes) {
        TypeString limit{node, TypeString::Terminal::Inf, 0};
        if (lo < limit && !(hi < limit)) return true;
    }
    return false;
}

PairVerdict pair_verdict(const LabelTree& t, const TypeString& a, const TypeString& b) {
    require_concrete(t, a);
    require_concrete(t, b);
    PairVerdict v{a, b, PairKind::NotPair, ""};
    if (a == b) {
        v.verdict = PairKind::EntropyOrEqual;
        v.justification = "same-type";
        return v;
    }
    if (infinitely_separated(t, a, b)) {
        v.justification = "type-separation";
        return v;
    }
    // Same node, finite sizes: square sizes within distance one share
    // entropy across the common boundary structure.
    auto window = [](const TypeString& s) {
        return std::pair<int, int>{s.t, s.t + (s.terminal == TypeString::Terminal::Pair ? 1 : 0)};
    };
    bool finite_a = a.terminal != TypeString::Terminal::Inf;
    bool finite_b = b.terminal != TypeString::Terminal::Inf;
    if (a.prefix == b.prefix && finite_a && finite_b) {
        auto [a0, a1] = window(a);
        auto [b0, b1] = window(b);
        int gap = std::max(b0 - a1, a0 - b1);
        if (gap <= 1) {
            v.verdict = PairKind::EntropyOrEqual;
            v.justification = "size-window";
            return v;
        }
    }
    const TypeString& lo = a < b ? a : b;
    const TypeString& hi = a < b ? b : a;
    if (type_successor(t, lo) == std::optional<TypeString>(hi)) {
        v.verdict = PairKind::ConnectableViaRepresentatives;
        v.justification = "lex-successor";
        return v;
    }
    v.justification = "beyond-window";
    return v;
}

std::function<PairVerdict(const TypeString&, const TypeString&)> base_pairs(const LabelTree& t) {
    t.validate();
    return [t](const TypeString& a, const TypeString& b) { return pair_verdict(t, a, b); };
}

// ---------------------------------------------------------------------------
// Flagged class terms

namespace {

ClassTerm normalizeC(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls:
        return t;
    case ClassTerm::Kind::Omega: {
        ClassTerm r = t;
        r.children[0] = normalizeC(t.children[0]);
        return r;
    }
    case ClassTerm::Kind::Sum: {
        std::vector<ClassTerm> flat;
        for (const ClassTerm& c : t.children) {
            ClassTerm n = normalizeC(c);
            if (n.kind == ClassTerm::Kind::Sum)
                for (ClassTerm& g : n.children) flat.push_back(std::move(g));
            else
                flat.push_back(std::move(n));
        }
        if (flat.empty()) throw std::logic_error("empty class sum");
        if (flat.size() == 1) return flat[0];
        return ClassTerm::sum(std::move(flat));
    }
    }
    throw std::logic_error("unreachable");
}

bool hminC(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls: return true;
    case ClassTerm::Kind::Sum: return hminC(t.children.front());
    case ClassTerm::Kind::Omega: return hminC(t.children[0]);
    }
    throw std::logic_error("unreachable");
}

bool hmaxC(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls: return true;
    case ClassTerm::Kind::Sum: return hmaxC(t.children.back());
    case ClassTerm::Kind::Omega: return false;
    }
    throw std::logic_error("unreachable");
}

bool finiteC(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls: return true;
    case ClassTerm::Kind::Sum:
        return std::all_of(t.children.begin(), t.children.end(), finiteC);
    case ClassTerm::Kind::Omega: return false;
    }
    throw std::logic_error("unreachable");
}

HClass first_class_flags(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls: return t.cls;
    case ClassTerm::Kind::Sum: return first_class_flags(t.children.front());
    case ClassTerm::Kind::Omega: return first_class_flags(t.children[0]);
    }
    throw std::logic_error("unreachable");
}

// The union of a lower and an upper class as one class.
HClass fuse(const HClass& lo, const HClass& hi) {
    return HClass{lo.has_min, hi.has_max, false};
}

// Replaces the least class of u by its fusion with `dropped` (a class lying
// directly below it).  An omega block has its first copy peeled off, since
// only that copy's least class changes.
ClassTerm fuse_front(const ClassTerm& u, const HClass& dropped) {
    switch (u.kind) {
    case ClassTerm::Kind::Cls:
        return ClassTerm::leaf(fuse(dropped, u.cls));
    case ClassTerm::Kind::Sum: {
        ClassTerm r = u;
        r.children.front() = fuse_front(r.children.front(), dropped);
        return normalizeC(r);
    }
    case ClassTerm::Kind::Omega:
        return normalizeC(
            ClassTerm::sum({fuse_front(u.children[0], dropped), u}));
    }
    throw std::logic_error("unreachable");
}

struct DropResult {
    std::optional<ClassTerm> rest;
    HClass removed;
};

DropResult drop_max_class(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls:
        return {std::nullopt, t.cls};
    case ClassTerm::Kind::Sum: {
        DropResult r = drop_max_class(t.children.back());
        std::vector<ClassTerm> parts(t.children.begin(), t.children.end() - 1);
        if (r.rest) parts.push_back(std::move(*r.rest));
        if (parts.empty()) return {std::nullopt, r.removed};
        return {normalizeC(ClassTerm::sum(std::move(parts))), r.removed};
    }
    case ClassTerm::Kind::Omega:
        throw PreconditionFailed("drop_max_class: no greatest class");
    }
    throw std::logic_error("unreachable");
}

DropResult drop_min_class(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls:
        return {std::nullopt, t.cls};
    case ClassTerm::Kind::Sum: {
        DropResult r = drop_min_class(t.children.front());
        std::vector<ClassTerm> parts;
        if (r.rest) parts.push_back(std::move(*r.rest));
        parts.insert(parts.end(), t.children.begin() + 1, t.children.end());
        if (parts.empty()) return {std::nullopt, r.removed};
        return {normalizeC(ClassTerm::sum(std::move(parts))), r.removed};
    }
    case ClassTerm::Kind::Omega: {
        // Remove the least class of the first copy; omega-many full copies
        // remain after it either way.
        DropResult r = drop_min_class(t.children[0]);
        if (!r.rest) return {t, r.removed};
        return {normalizeC(ClassTerm::sum({std::move(*r.rest), t})), r.removed};
    }
    }
    throw std::logic_error("unreachable");
}

ClassTerm deriveC(const ClassTerm& t);

ClassTerm derive_sumC(const ClassTerm& t) {
    std::vector<ClassTerm> out;
    const ClassTerm* prev = nullptr;
    for (const ClassTerm& c : t.children) {
        ClassTerm u = deriveC(c);
        if (prev && hmaxC(*prev) && hminC(c) && !out.empty()) {
            // Seam: the boundary classes are at finite distance and fuse.
            DropResult d = drop_max_class(out.back());
            if (d.rest) out.back() = std::move(*d.rest);
            else out.pop_back();
            u = fuse_front(u, d.removed);
        }
        out.push_back(std::move(u));
        prev = &c;
    }
    return normalizeC(ClassTerm::sum(std::move(out)));
}

ClassTerm derive_omegaC(const ClassTerm& body) {
    if (finiteC(body)) {
        // Omega-many finite blocks of classes chain into one class without a
        // greatest element.
        return ClassTerm::leaf(HClass{first_class_flags(body).has_min, false, false});
    }
    ClassTerm u = deriveC(body);
    if (!(hmaxC(body) && hminC(body)))
        return ClassTerm::omega(std::move(u));  // copies stay infinitely apart
    // Each copy's greatest class fuses with the next copy's least class.
    DropResult head = drop_max_class(u);
    HClass seam = fuse(head.removed, first_class_flags(u));
    if (!head.rest)
        return ClassTerm::leaf(HClass{first_class_flags(u).has_min, false, false});
    std::vector<ClassTerm> block{ClassTerm::leaf(seam)};
    DropResult middle = drop_min_class(*head.rest);
    if (middle.rest) block.push_back(std::move(*middle.rest));
    std::vector<ClassTerm> parts;
    parts.push_back(std::move(*head.rest));
    parts.push_back(ClassTerm::omega(normalizeC(ClassTerm::sum(std::move(block)))));
    return normalizeC(ClassTerm::sum(std::move(parts)));
}

ClassTerm deriveC(const ClassTerm& t) {
    switch (t.kind) {
    case ClassTerm::Kind::Cls: return t;
    case ClassTerm::Kind::Sum: return derive_sumC(t);
    case ClassTerm::Kind::Omega: return derive_omegaC(t.children[0]);
    }
    throw std::logic_error("unreachable");
}

ClassTerm discrete(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom:
        return ClassTerm::leaf(HClass{true, true, true});
    case OrderTerm::Kind::Sum: {
        std::vector<ClassTerm> parts;
        for (const OrderTerm& c : t.children) parts.push_back(discrete(c));
        return ClassTerm::sum(std::move(parts));
    }
    case OrderTerm::Kind::Omega:
        return ClassTerm::omega(discrete(t.children[0]));
    case OrderTerm::Kind::OmegaStar:
        throw PreconditionFailed("hierarchy: reversed omega blocks do not arise from tree shifts");
    case OrderTerm::Kind::Dense:
        throw PreconditionFailed("hierarchy: dense part has no discrete partition");
    }
    throw std::logic_error("unreachable");
}

long long count_points(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom: return 1;
    case OrderTerm::Kind::Sum: {
        long long total = 0;
        for (const OrderTerm& c : t.children) {
            long long n = count_points(c);
            if (n < 0) return -1;
            total += n;
        }
        return total;
    }
    default: return -1;
    }
}

}  // namespace

TypeRelation initial_relation(const OrderTerm& t) {
    TypeRelation r;
    r.classes = normalizeC(discrete(normalize(t)));
    r.stage = 0;
    return r;
}

TypeRelation transitive_step(const TypeRelation& r) {
    TypeRelation next;
    next.classes = deriveC(r.classes);
    next.stage = r.stage + 2;
    next.log = r.log;
    next.log.push_back(StageInfo{next.stage, StageInfo::Kind::Transitive,
                                 class_count(next.classes)});
    return next;
}

long long class_count(const ClassTerm& c) {
    switch (c.kind) {
    case ClassTerm::Kind::Cls: return 1;
    case ClassTerm::Kind::Sum: {
        long long total = 0;
        for (const ClassTerm& ch : c.children) {
            long long n = class_count(ch);
            if (n < 0) return -1;
            total += n;
        }
        return total;
    }
    case ClassTerm::Kind::Omega: return -1;
    }
    throw std::logic_error("unreachable");
}

OrderTerm erase_flags(const ClassTerm& c) {
    switch (c.kind) {
    case ClassTerm::Kind::Cls: return OrderTerm::atom();
    case ClassTerm::Kind::Sum: {
        std::vector<OrderTerm> parts;
        for (const ClassTerm& ch : c.children) parts.push_back(erase_flags(ch));
        return OrderTerm::sum(std::move(parts));
    }
    case ClassTerm::Kind::Omega:
        return OrderTerm::omega(erase_flags(c.children[0]));
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Rank extraction

namespace {

// The closure step alone saturates exactly when the partition is one big
// class without a greatest element followed by a single limit point: every
// pair is then a limit of within-class pairs.  Any further class, or an
// interior point of a non-singleton top class, is not such a limit.
bool closure_saturates(const ClassTerm& partition) {
    if (partition.kind != ClassTerm::Kind::Sum || partition.children.size() != 2) return false;
    const ClassTerm& lo = partition.children[0];
    const ClassTerm& hi = partition.children[1];
    return lo.kind == ClassTerm::Kind::Cls && hi.kind == ClassTerm::Kind::Cls &&
           hi.cls.singleton && !lo.cls.has_max;
}

}  // namespace

HierarchyResult run_hierarchy(const OrderTerm& t, int max_steps) {
    HierarchyResult res;
    OrderTerm n = normalize(t);
    if (contains_dense(n)) {
        res.has_tcpe = false;
        res.trace.push_back(StageInfo{1, StageInfo::Kind::Base, -1});
        res.note = "dense chain of types: no stage saturates";
        return res;
    }
    long long points = count_points(n);
    res.trace.push_back(StageInfo{1, StageInfo::Kind::Base, points});
    if (points >= 0 && points <= 2) {
        // Every pair of points is already a base pair.
        res.rank = Ordinal::nat(1);
        res.parity = HierarchyResult::Parity::Odd;
        return res;
    }
    TypeRelation r = initial_relation(n);
    for (int k = 1; k <= max_steps; ++k) {
        ClassTerm prev = r.classes;
        long long prev_count = k == 1 ? points : class_count(prev);
        r = transitive_step(r);
        long long cnt = class_count(r.classes);
        if (cnt == 1) {
            if (k > 1 && closure_saturates(prev)) {
                res.trace.push_back(
                    StageInfo{2 * k - 1, StageInfo::Kind::Closure, 1});
                res.rank = Ordinal::nat(static_cast<std::uint64_t>(2 * k - 1));
                res.parity = HierarchyResult::Parity::Odd;
            } else {
                if (k > 1)
                    res.trace.push_back(
                        StageInfo{2 * k - 1, StageInfo::Kind::Closure, prev_count});
                res.trace.push_back(StageInfo{2 * k, StageInfo::Kind::Transitive, 1});
                res.rank = Ordinal::nat(static_cast<std::uint64_t>(2 * k));
                res.parity = HierarchyResult::Parity::Even;
            }
            return res;
        }
        if (k > 1)
            res.trace.push_back(StageInfo{2 * k - 1, StageInfo::Kind::Closure, prev_count});
        res.trace.push_back(StageInfo{2 * k, StageInfo::Kind::Transitive, cnt});
    }
    throw ResourceLimit("run_hierarchy: did not saturate within step limit");
}

HierarchyResult run_hierarchy(const LabelTree& t, int max_steps) {
    t.validate();
    if (t.ill_founded()) {
        HierarchyResult res = run_hierarchy(order_of_tree(fatten(t)), max_steps);
        res.note = "tree has promised infinite branches; analyzed its fattening";
        return res;
    }
    return run_hierarchy(order_of_tree(t), max_steps);
}

HierarchyResult run_hierarchy(const FattenedTree& t, int max_steps) {
    return run_hierarchy(order_of_tree(t), max_steps);
}

// ---------------------------------------------------------------------------
// Cross-validation

namespace {

// Sound rewriting P + P*omega -> P*omega, used to compare the engine's
// quotient (which peels single copies off omega blocks when fusing) with the
// plain derivative (which does not).
OrderTerm canon(const OrderTerm& t) {
    OrderTerm n = normalize(t);
    if (n.kind == OrderTerm::Kind::Omega || n.kind == OrderTerm::Kind::OmegaStar) {
        OrderTerm r = n;
        r.children[0] = canon(n.children[0]);
        return r;
    }
    if (n.kind != OrderTerm::Kind::Sum) return n;
    std::vector<OrderTerm> parts;
    for (const OrderTerm& c : n.children) {
        OrderTerm u = canon(c);
        if (u.kind == OrderTerm::Kind::Sum)
            for (OrderTerm& g : u.children) parts.push_back(std::move(g));
        else
            parts.push_back(std::move(u));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].kind != OrderTerm::Kind::Omega) continue;
            const OrderTerm& body = parts[i].children[0];
            std::vector<const OrderTerm*> run;
            if (body.kind == OrderTerm::Kind::Sum)
                for (const OrderTerm& b : body.children) run.push_back(&b);
            else
                run.push_back(&body);
            if (run.size() > i) continue;
            bool match = true;
            for (size_t k = 0; k < run.size() && match; ++k)
                if (!(parts[i - run.size() + k] == *run[k])) match = false;
            if (match) {
                parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i - run.size()),
                            parts.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (parts.size() == 1) return parts[0];
    return OrderTerm::sum(std::move(parts));
}

}  // namespace

CrosscheckReport crosscheck_h(const LabelTree& t, int max_steps) {
    t.validate();
    OrderTerm order = t.ill_founded() ? order_of_tree(fatten(t)) : order_of_tree(t);
    CrosscheckReport rep;
    if (contains_dense(order)) {
        rep.ok = false;
        rep.detail = "dense type chain: derivatives never stabilize";
        return rep;
    }
    TypeRelation r = initial_relation(order);
    OrderTerm plain = normalize(order);
    std::ostringstream detail;
    for (int k = 1; k <= max_steps; ++k) {
        r = transitive_step(r);
        plain = hausdorff_derivative(plain);
        OrderTerm engine_view = canon(erase_flags(r.classes));
        OrderTerm derivative_view = canon(plain);
        rep.stages = k;
        if (!(engine_view == derivative_view)) {
            rep.ok = false;
            rep.detail = "stage " + std::to_string(2 * k) + ": engine partition " +
                         term_to_text(engine_view) + " != derivative " +
                         term_to_text(derivative_view);
            return rep;
        }
        detail << "stage " << 2 * k << ": " << class_count(r.classes) << " classes agree\n";
        if (plain.is_atom()) {
            rep.detail = detail.str();
            return rep;
        }
    }
    throw ResourceLimit("crosscheck_h: derivatives did not stabilize within step limit");
}

}  // namespace sft
