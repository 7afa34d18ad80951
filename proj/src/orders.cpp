#include "sft/orders.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace sft {

// ---------------------------------------------------------------------------
// Normalization and predicates

OrderTerm normalize(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom:
    case OrderTerm::Kind::Dense:
        return t;
    case OrderTerm::Kind::Omega:
    case OrderTerm::Kind::OmegaStar: {
        if (t.children.size() != 1)
            throw std::invalid_argument("omega/omega* needs exactly one body");
        OrderTerm r = t;
        r.children[0] = normalize(t.children[0]);
        return r;
    }
    case OrderTerm::Kind::Sum: {
        std::vector<OrderTerm> flat;
        for (const OrderTerm& c : t.children) {
            OrderTerm n = normalize(c);
            if (n.kind == OrderTerm::Kind::Sum) {
                for (OrderTerm& g : n.children) flat.push_back(std::move(g));
            } else {
                flat.push_back(std::move(n));
            }
        }
        if (flat.empty()) throw std::invalid_argument("empty sum");
        if (flat.size() == 1) return flat[0];
        return OrderTerm::sum(std::move(flat));
    }
    }
    throw std::logic_error("unreachable");
}

bool is_finite_order(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom: return true;
    case OrderTerm::Kind::Sum:
        return std::all_of(t.children.begin(), t.children.end(), is_finite_order);
    default: return false;
    }
}

bool has_min(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom: return true;
    case OrderTerm::Kind::Sum: return has_min(t.children.front());
    case OrderTerm::Kind::Omega: return has_min(t.children[0]);
    case OrderTerm::Kind::OmegaStar: return false;
    case OrderTerm::Kind::Dense: return false;
    }
    throw std::logic_error("unreachable");
}

bool has_max(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom: return true;
    case OrderTerm::Kind::Sum: return has_max(t.children.back());
    case OrderTerm::Kind::Omega: return false;
    case OrderTerm::Kind::OmegaStar: return has_max(t.children[0]);
    case OrderTerm::Kind::Dense: return false;
    }
    throw std::logic_error("unreachable");
}

bool contains_dense(const OrderTerm& t) {
    if (t.kind == OrderTerm::Kind::Dense) return true;
    return std::any_of(t.children.begin(), t.children.end(), contains_dense);
}

OrderTerm reverse_term(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom:
    case OrderTerm::Kind::Dense:
        return t;
    case OrderTerm::Kind::Omega:
        return OrderTerm::omega_star(reverse_term(t.children[0]));
    case OrderTerm::Kind::OmegaStar:
        return OrderTerm::omega(reverse_term(t.children[0]));
    case OrderTerm::Kind::Sum: {
        std::vector<OrderTerm> rc;
        for (auto it = t.children.rbegin(); it != t.children.rend(); ++it)
            rc.push_back(reverse_term(*it));
        return OrderTerm::sum(std::move(rc));
    }
    }
    throw std::logic_error("unreachable");
}

std::optional<OrderTerm> drop_max(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom:
        return std::nullopt;
    case OrderTerm::Kind::Sum: {
        std::vector<OrderTerm> parts(t.children.begin(), t.children.end() - 1);
        std::optional<OrderTerm> tail = drop_max(t.children.back());
        if (tail) parts.push_back(std::move(*tail));
        if (parts.empty()) return std::nullopt;
        return normalize(OrderTerm::sum(std::move(parts)));
    }
    case OrderTerm::Kind::OmegaStar: {
        // ...ttt minus the final copy's greatest element: still omega*-many
        // whole copies, followed by one truncated copy.
        std::optional<OrderTerm> tail = drop_max(t.children[0]);
        if (!tail) return t;  // copies are single atoms; one atom vanishes
        return normalize(OrderTerm::sum({t, std::move(*tail)}));
    }
    default:
        throw PreconditionFailed("drop_max: term has no greatest element");
    }
}

std::optional<OrderTerm> drop_min(const OrderTerm& t) {
    std::optional<OrderTerm> r = drop_max(reverse_term(t));
    if (!r) return std::nullopt;
    return normalize(reverse_term(*r));
}

// ---------------------------------------------------------------------------
// Finite-condensation derivative
//
// Two elements are identified when only finitely many elements lie between
// them.  On terms:
//   * Atom and Dense are fixed points.
//   * In a Sum, each summand condenses independently; the class at a seam
//     X | Y merges exactly when X has a greatest and Y has a least element
//     (an element with a finite tail forces a greatest element, and dually,
//     so endpoint existence is the exact seam criterion).
//   * In Omega(t), a finite block collapses the whole order to a point;
//     otherwise each copy condenses to D(t), and consecutive copies merge at
//     the seam iff t has both endpoints.
//   * OmegaStar is the mirror image, computed by reversing.

namespace {

OrderTerm derive(const OrderTerm& t);

// Removes the greatest class from the accumulated summand list.
void drop_last_class(std::vector<OrderTerm>& out) {
    std::optional<OrderTerm> d = drop_max(out.back());
    if (d) out.back() = std::move(*d);
    else out.pop_back();
}

OrderTerm derive_sum(const OrderTerm& t) {
    std::vector<OrderTerm> out;
    const OrderTerm* prev = nullptr;
    for (const OrderTerm& c : t.children) {
        OrderTerm u = derive(c);
        if (prev && has_max(*prev) && has_min(c) && !out.empty())
            drop_last_class(out);  // seam merge: the two boundary classes fuse
        out.push_back(std::move(u));
        prev = &c;
    }
    if (out.empty()) return OrderTerm::atom();
    return normalize(OrderTerm::sum(std::move(out)));
}

OrderTerm derive_omega(const OrderTerm& body) {
    if (is_finite_order(body)) return OrderTerm::atom();  // omega of a finite block ~ omega
    OrderTerm u = derive(body);
    if (!(has_max(body) && has_min(body)))
        return OrderTerm::omega(std::move(u));  // copies stay infinitely apart
    // Seams merge: the first copy keeps all but its last class, then
    // omega-many blocks of (merged seam class + interior classes).
    std::optional<OrderTerm> head = drop_max(u);
    if (!head) return OrderTerm::atom();  // single class per copy, all fused
    std::vector<OrderTerm> block{OrderTerm::atom()};
    std::optional<OrderTerm> middle = drop_min(*head);
    if (middle) block.push_back(std::move(*middle));
    std::vector<OrderTerm> parts;
    parts.push_back(std::move(*head));
    parts.push_back(OrderTerm::omega(normalize(OrderTerm::sum(std::move(block)))));
    return normalize(OrderTerm::sum(std::move(parts)));
}

OrderTerm derive(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom:
    case OrderTerm::Kind::Dense:
        return t;
    case OrderTerm::Kind::Sum:
        return derive_sum(t);
    case OrderTerm::Kind::Omega:
        return derive_omega(t.children[0]);
    case OrderTerm::Kind::OmegaStar: {
        OrderTerm mirrored = derive_omega(normalize(reverse_term(t.children[0])));
        return normalize(reverse_term(mirrored));
    }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

OrderTerm hausdorff_derivative(const OrderTerm& t) {
    return derive(normalize(t));
}

// ---------------------------------------------------------------------------
// Hausdorff rank

HausdorffRank hausdorff_rank(const OrderTerm& t, int max_steps) {
    OrderTerm cur = normalize(t);
    if (contains_dense(cur)) return HausdorffRank{false, {}};
    for (int step = 0; step <= max_steps; ++step) {
        if (cur.is_atom())
            return HausdorffRank{true, Ordinal::nat(step == 0 ? 1 : static_cast<std::uint64_t>(step))};
        cur = derive(cur);
    }
    throw ResourceLimit("hausdorff_rank: derivative did not stabilize within step limit");
}

// ---------------------------------------------------------------------------
// Ordinals

Ordinal Ordinal::nat(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.terms_.push_back({0, n});
    return o;
}

Ordinal Ordinal::omega_pow(int e, std::uint64_t c) {
    if (e < 0 || c == 0) throw std::invalid_argument("omega_pow: need e >= 0, c >= 1");
    Ordinal o;
    o.terms_.push_back({e, c});
    return o;
}

bool Ordinal::is_nat() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
}

std::uint64_t Ordinal::as_nat() const {
    if (!is_nat()) throw PreconditionFailed("as_nat: ordinal is infinite");
    return terms_.empty() ? 0 : terms_[0].second;
}

Ordinal Ordinal::successor() const { return *this + nat(1); }

Ordinal Ordinal::times_nat(std::uint64_t n) const {
    if (n == 0 || is_zero()) return Ordinal{};
    Ordinal r = *this;
    r.terms_[0].second *= n;  // (w^e*c + tail)*n = w^e*(c*n) + tail
    return r;
}

Ordinal Ordinal::times_omega() const {
    if (is_zero()) return Ordinal{};
    return omega_pow(terms_[0].first + 1);
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    Ordinal r;
    int lead = b.terms_[0].first;
    for (const auto& [e, c] : a.terms_)
        if (e > lead) r.terms_.push_back({e, c});
    // A term of a with exponent == lead combines with b's leading term;
    // smaller terms of a are absorbed.
    r.terms_.push_back(b.terms_[0]);
    for (const auto& [e, c] : a.terms_)
        if (e == lead) r.terms_.back().second += c;
    r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
    return r;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
    return std::lexicographical_compare_three_way(
        terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end());
}

std::string Ordinal::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (e == 0) {
            os << c;
        } else {
            os << "w";
            if (e > 1) os << "^" << e;
            if (c > 1) os << "*" << c;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Text format

std::string term_to_text(const OrderTerm& t) {
    switch (t.kind) {
    case OrderTerm::Kind::Atom: return "atom";
    case OrderTerm::Kind::Dense: return "dense";
    case OrderTerm::Kind::Omega: return "(omega " + term_to_text(t.children[0]) + ")";
    case OrderTerm::Kind::OmegaStar: return "(omega* " + term_to_text(t.children[0]) + ")";
    case OrderTerm::Kind::Sum: {
        std::string s = "(sum";
        for (const OrderTerm& c : t.children) s += " " + term_to_text(c);
        return s + ")";
    }
    }
    throw std::logic_error("unreachable");
}

namespace {

struct Lexer {
    std::istream& in;
    int peek_nonspace() {
        int c = in.peek();
        while (c != EOF && std::isspace(c)) {
            in.get();
            c = in.peek();
        }
        return c;
    }
    std::string next() {
        int c = peek_nonspace();
        if (c == EOF) throw std::runtime_error("order term: unexpected end of input");
        in.get();
        if (c == '(' || c == ')') return std::string(1, static_cast<char>(c));
        std::string tok(1, static_cast<char>(c));
        while (true) {
            int p = in.peek();
            if (p == EOF || std::isspace(p) || p == '(' || p == ')') break;
            tok.push_back(static_cast<char>(in.get()));
        }
        return tok;
    }
};

OrderTerm parse_term(Lexer& lx) {
    std::string tok = lx.next();
    if (tok == "atom") return OrderTerm::atom();
    if (tok == "dense") return OrderTerm::dense();
    if (tok != "(") throw std::runtime_error("order term: unexpected token '" + tok + "'");
    std::string head = lx.next();
    std::vector<OrderTerm> parts;
    if (head == "sum") {
        while (true) {
            int c = lx.peek_nonspace();
            if (c == EOF) throw std::runtime_error("order term: unexpected end of input");
            if (c == ')') {
                lx.in.get();
                break;
            }
            parts.push_back(parse_term(lx));
        }
        if (parts.empty()) throw std::runtime_error("order term: empty sum");
        return OrderTerm::sum(std::move(parts));
    }
    if (head == "omega" || head == "omega*") {
        OrderTerm body = parse_term(lx);
        if (lx.next() != ")") throw std::runtime_error("order term: expected ')'");
        return head == "omega" ? OrderTerm::omega(std::move(body))
                               : OrderTerm::omega_star(std::move(body));
    }
    throw std::runtime_error("order term: unknown form '" + head + "'");
}

}  // namespace

OrderTerm term_from_text(std::istream& in) {
    Lexer lx{in};
    return normalize(parse_term(lx));
}

OrderTerm term_from_text(const std::string& text) {
    std::istringstream in(text);
    return term_from_text(in);
}

}  // namespace sft
