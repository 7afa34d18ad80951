#ifndef SFT_ORDERS_HPP
#define SFT_ORDERS_HPP

// Symbolic scattered linear orders.
//
// An OrderTerm denotes a countable linear order built from the one-point
// order (Atom), finite concatenation (Sum), omega-many copies (Omega), and
// omega*-many copies (OmegaStar).  A Dense marker stands for an order with a
// densely ordered subset; no calculus is attempted on it beyond propagation.
//
// The central operation is the finite-condensation ("Hausdorff") derivative:
// the quotient by the relation "only finitely many elements in between",
// computed as a term rewrite.  Iterating the derivative until a single point
// remains yields the Hausdorff rank; terms carrying a Dense marker are
// reported as not scattered instead.
//
// Ordinal is a small Cantor-normal-form ordinal type (exponents are natural
// numbers, so values below omega^omega) with the arithmetic needed here:
// addition, multiplication by a natural number and by omega, successor,
// and comparison.

#include "sft/errors.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sft {

// ---------------------------------------------------------------------------
// Order terms

struct OrderTerm {
    enum class Kind { Atom, Sum, Omega, OmegaStar, Dense };

    Kind kind = Kind::Atom;
    // Sum: the summands in order (>= 1 after normalization);
    // Omega / OmegaStar: exactly one child, the repeated block.
    std::vector<OrderTerm> children;

    static OrderTerm atom() { return OrderTerm{}; }
    static OrderTerm dense() { return OrderTerm{Kind::Dense, {}}; }
    static OrderTerm sum(std::vector<OrderTerm> parts) {
        return OrderTerm{Kind::Sum, std::move(parts)};
    }
    static OrderTerm omega(OrderTerm body) {
        return OrderTerm{Kind::Omega, {std::move(body)}};
    }
    static OrderTerm omega_star(OrderTerm body) {
        return OrderTerm{Kind::OmegaStar, {std::move(body)}};
    }

    bool is_atom() const { return kind == Kind::Atom; }

    friend bool operator==(const OrderTerm&, const OrderTerm&) = default;
};

// Flattens nested sums, collapses singleton sums, and drops empty sums
// inside larger ones.  All operations below normalize their results.
OrderTerm normalize(const OrderTerm& t);

// True iff the denoted order is finite (no Omega/OmegaStar/Dense anywhere).
bool is_finite_order(const OrderTerm& t);
// True iff the denoted order has a least / greatest element.  Dense markers
// are treated as orders without endpoints.
bool has_min(const OrderTerm& t);
bool has_max(const OrderTerm& t);
// True iff a Dense marker occurs anywhere in the term.
bool contains_dense(const OrderTerm& t);

// The reversed order: Sum children reverse, Omega and OmegaStar swap.
OrderTerm reverse_term(const OrderTerm& t);

// The term with its greatest / least element removed; empty when the term
// is a single Atom.  Precondition: has_max(t) / has_min(t).
std::optional<OrderTerm> drop_max(const OrderTerm& t);
std::optional<OrderTerm> drop_min(const OrderTerm& t);

// The finite-condensation quotient, as a term.  Dense markers are preserved
// verbatim.
OrderTerm hausdorff_derivative(const OrderTerm& t);

// ---------------------------------------------------------------------------
// Ordinals in Cantor normal form (below omega^omega)

class Ordinal {
public:
    Ordinal() = default;  // zero
    static Ordinal nat(std::uint64_t n);
    static Ordinal omega() { return omega_pow(1); }
    // omega^e * c  (c >= 1; e >= 0)
    static Ordinal omega_pow(int e, std::uint64_t c = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_nat() const;           // finite (possibly zero)
    std::uint64_t as_nat() const;  // precondition: is_nat()

    Ordinal successor() const;
    Ordinal times_nat(std::uint64_t n) const;
    Ordinal times_omega() const;

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    Ordinal& operator+=(const Ordinal& b) { return *this = *this + b; }

    std::strong_ordering operator<=>(const Ordinal& o) const;
    bool operator==(const Ordinal& o) const = default;

    // "0", "7", "w", "w^2*3 + w + 5".
    std::string to_string() const;

    // CNF terms as (exponent, coefficient), exponents strictly decreasing.
    const std::vector<std::pair<int, std::uint64_t>>& cnf() const { return terms_; }

private:
    std::vector<std::pair<int, std::uint64_t>> terms_;
};

// ---------------------------------------------------------------------------
// Hausdorff rank

struct HausdorffRank {
    bool scattered = true;  // false: a Dense marker was found (no rank)
    Ordinal rank;           // valid only when scattered
};

// The least number of derivative steps after which the term is a single
// Atom, with the one-point (and any finite) order assigned rank 1.  Returns
// scattered = false when the term carries a Dense marker.  Throws
// ResourceLimit if the iteration does not stabilize within `max_steps`.
HausdorffRank hausdorff_rank(const OrderTerm& t, int max_steps = 64);

// ---------------------------------------------------------------------------
// Text format
//
// s-expressions: "atom", "dense", "(sum t1 t2 ...)", "(omega t)",
// "(omega* t)".

std::string term_to_text(const OrderTerm& t);
OrderTerm term_from_text(const std::string& text);
OrderTerm term_from_text(std::istream& in);

}  // namespace sft

#endif  // SFT_ORDERS_HPP
