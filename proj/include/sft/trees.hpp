#ifndef SFT_TREES_HPP
#define SFT_TREES_HPP

// Trees of square types and the shifts they define.
//
// A LabelTree is a finite prefix-closed set of label strings; each label is
// a size pair (n, n+1), stored by its lower component n.  A node may carry a
// promise marker declaring that an infinite branch passes through it (the
// finite representation of an ill-founded tree).
//
// Each node sigma names a pair of macrosymbols A_sigma / B_sigma over {0,1}:
// A at the root is "0", B is "1"; one level up, B_{sigma+(n,n+1)} is an
// (n+1)-square over {A_sigma, B_sigma} and A_{sigma+(n,n+1)} is an n-square
// plus a top row and right column of B_sigma, both of macro side n+3.  The
// base-cell side of either symbol is j_sigma = prod (n_j + 3).
//
// The compiled rule family for a tree: for every node, the square-packing
// rules over the node's macro alphabet, plus a conditional grid rule: once a
// tightly framed n-square and a B both occur at that level, every macro
// occurrence must sit in a full grid of macro occurrences.
//
// Configurations are classified by type: the longest node rho whose macro
// alphabet parses the whole configuration (with grid alignment), followed by
// the square-size type seen at that level; the universe of types is ordered
// lexicographically under 0 < (0,1) < 1 < (1,2) < ... < infinity.
//
// Fattening replaces each node's child list by omega-many interleaved copies
// (the product of the tree with the full omega-branching tree, relabeled into
// even pairs), preserving every node's well-founded rank.

#include "sft/errors.hpp"
#include "sft/grid.hpp"
#include "sft/orders.hpp"

#include <set>
#include <utility>

namespace sft {

// ---------------------------------------------------------------------------
// Label trees

enum class TreeFlavor { Omega, TwoOmega };

// A tree node: the lower components n of the labels (n, n+1) on the path
// from the root.  The root is the empty vector.
using TreeNode = std::vector<int>;

struct LabelTree {
    std::set<TreeNode> nodes{TreeNode{}};  // prefix-closed, contains the root
    std::set<TreeNode> promises;           // nodes with a declared infinite branch
    TreeFlavor flavor = TreeFlavor::Omega;

    bool contains(const TreeNode& node) const { return nodes.count(node) != 0; }
    bool ill_founded() const { return !promises.empty(); }
    // Ascending lower components of the children of `node`.
    std::vector<int> child_labels(const TreeNode& node) const;
    // Throws PreconditionFailed on a malformed tree (prefix-closure, root
    // membership, label parity for flavor TwoOmega, promises on non-nodes).
    void validate() const;
};

// Text format: one node per line; the root is "()", other nodes are the
// concatenated labels "(n,n+1)(m,m+1)..."; a leading "* " declares an
// infinite branch through the node.  An optional first line
// "flavor omega|2omega" fixes the flavor (default: 2omega exactly when every
// label is even and at least one node has labels).
LabelTree tree_from_text(std::istream& in);
LabelTree tree_from_text(const std::string& text);
std::string tree_to_text(const LabelTree& t);
std::string node_to_text(const TreeNode& node);

// ---------------------------------------------------------------------------
// Macrosymbols

enum class Macro { A, B };

// Base-cell side of A_sigma / B_sigma: the product of (n + 3) over the
// labels of sigma.  Throws ResourceLimit on overflow.
long long macro_side(const TreeNode& sigma);

// The macrosymbol as a {0,1} pattern of side macro_side(sigma) anchored at
// the origin.
Pattern render_macrosymbol(const TreeNode& sigma, Macro which);

// ---------------------------------------------------------------------------
// Rule compilation

// The forbidden-set family of the tree's shift, truncated at diameter d:
// for each node, the square-packing rules over that node's macro alphabet
// (explicit patterns up to d where expressible), plus the conditional grid
// rule as a generator with a dedicated checker.
ForbiddenSet compile_rules(const LabelTree& t, int d);

// ---------------------------------------------------------------------------
// Types

struct TypeString {
    enum class Terminal {
        Nat,        // squares of one size t
        Pair,       // squares of sizes t and t+1
        Inf,        // no finite squares
        OmegaTail,  // marker: the omitted infinite tail of a node's block
        Path        // marker: an infinite branch (never enumerated concretely)
    };

    TreeNode prefix;                     // labels of the deepest regular node
    Terminal terminal = Terminal::Inf;
    int t = 0;                           // Nat / Pair value

    bool marker() const {
        return terminal == Terminal::OmegaTail || terminal == Terminal::Path;
    }
    // Lexicographic under 0 < (0,1) < 1 < ... < infinity, markers placed at
    // their documented slots (OmegaTail after all finite entries of a block,
    // Path directly after its node's prefix).
    friend std::strong_ordering operator<=>(const TypeString& a, const TypeString& b);
    friend bool operator==(const TypeString&, const TypeString&) = default;
};

std::string to_string(const TypeString& s);

// Grid alignment of a parsing: one residue per descended level.
struct TypeResult {
    TypeString type;
    std::vector<Cell> alignment;  // alignment[k] in [0, j_{prefix|k+1})^2
    bool certified = true;
};

// Classifies a doubly-periodic configuration over {0,1}: finds the deepest
// node whose macro alphabet tiles x (with grid alignment), then reads the
// square-size type at that level.  Throws PreconditionFailed when the macro
// parse at the deepest level violates the packing rules (x is not in the
// shift).
TypeResult type_of(const PeriodicConfig& x, const LabelTree& t);

// The ordered list of all types of the tree's shift, with each node's
// omega-block truncated at `cutoff` and closed by an OmegaTail marker, and
// promised branches contributing a symbolic Path marker.
std::vector<TypeString> types_universe(const LabelTree& t, int cutoff);

// ---------------------------------------------------------------------------
// Ranks and fattening

struct TreeRankResult {
    bool well_founded = true;
    Ordinal rank;  // valid only when well_founded
};

// Well-founded rank: leaves have rank 1, otherwise 1 + max over children;
// nodes with promised branches below them are ill-founded.
TreeRankResult tree_rank(const LabelTree& t, const TreeNode& node = {});

// The fattened tree: every node's children are replaced by omega-many
// interleaved copies cycling through the original child list, relabeled to
// even pairs (2N, 2N+1) so code N names copy N/k of child N mod k.  A node
// whose skeleton position carries a promise accepts every continuation.
class FattenedTree {
public:
    explicit FattenedTree(LabelTree skeleton);

    const LabelTree& skeleton() const { return skel_; }
    // Membership of a fattened node (labels given by lower components 2N).
    bool contains(const TreeNode& fat_node) const;
    // Rank of a fattened node = rank of its decoded skeleton node.
    TreeRankResult rank_of(const TreeNode& fat_node) const;
    // Decoded skeleton position, or nullopt if not a member.
    std::optional<TreeNode> decode(const TreeNode& fat_node) const;

private:
    LabelTree skel_;
};

FattenedTree fatten(const LabelTree& s);

// ---------------------------------------------------------------------------
// Order terms of tree shifts
//
// The type universe in its lexicographic order, as a symbolic OrderTerm:
// at each node, an omega-interleaving of atoms (non-member labels) and child
// subterms, closed by an omega tail and the infinity point.  Promised
// branches in a fattened tree yield a Dense marker (their paths contain a
// copy of the rationals).

OrderTerm order_of_tree(const LabelTree& t);       // requires no promises
OrderTerm order_of_tree(const FattenedTree& t);

}  // namespace sft

#endif  // SFT_TREES_HPP
