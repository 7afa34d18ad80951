#include "sft/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <istream>
#include <sstream>
#include <thread>

namespace sft {

namespace {

constexpr int kUnassigned = -1;

struct Placement {
    int pattern = 0;   // index into normalized pattern list
    Cell anchor;       // translation applied to the normalized pattern
};

// One search engine instance; single-threaded.
class Searcher {
public:
    Searcher(const TilingProblem& p, const std::map<Cell, int>& extra_pins)
        : p_(p), W_(p.region.w), H_(p.region.h) {
        if (W_ < 1 || H_ < 1) throw std::invalid_argument("region must be nonempty");
        int k = p.domain_size();
        if (k < 1 || k > 64) throw std::invalid_argument("domain size must be in [1,64]");
        full_mask_ = (k == 64) ? ~0ull : ((1ull << k) - 1);
        assign_.assign(static_cast<size_t>(W_ * H_), kUnassigned);
        domain_.assign(static_cast<size_t>(W_ * H_), full_mask_);

        if (p_.wang()) {
            build_wang_masks();
        } else {
            normalize_patterns();
            if (!p_.allow_e.empty()) build_symbol_masks();
        }

        for (const auto& [c, v] : p_.pins) pin(c, v);
        for (const auto& [c, v] : extra_pins) pin(c, v);
    }

    // Runs the search.  on_solution returns false to stop enumeration.
    SolveStatus run(const std::function<bool(const Pattern&)>& on_solution) {
        if (contradiction_) return SolveStatus::Unsat;
        stop_ = false;
        found_any_ = false;
        // Initial propagation from pins and borders.
        for (int i = 0; i < W_ * H_; ++i) queue_.push_back(i);
        if (!propagate()) return SolveStatus::Unsat;
        dfs(on_solution);
        if (budget_hit_ && !found_any_) return SolveStatus::Budget;
        return found_any_ ? SolveStatus::Sat : SolveStatus::Unsat;
    }

    std::uint64_t nodes() const { return nodes_; }
    bool budget_hit() const { return budget_hit_; }

private:
    // -- setup ------------------------------------------------------------

    void build_wang_masks() {
        int k = static_cast<int>(p_.tiles.size());
        east_of_.assign(static_cast<size_t>(k), 0);
        west_of_.assign(static_cast<size_t>(k), 0);
        north_of_.assign(static_cast<size_t>(k), 0);
        south_of_.assign(static_cast<size_t>(k), 0);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) {
                if (p_.tiles[static_cast<size_t>(a)].e == p_.tiles[static_cast<size_t>(b)].w)
                    east_of_[static_cast<size_t>(a)] |= 1ull << b;
                if (p_.tiles[static_cast<size_t>(a)].w == p_.tiles[static_cast<size_t>(b)].e)
                    west_of_[static_cast<size_t>(a)] |= 1ull << b;
                if (p_.tiles[static_cast<size_t>(a)].n == p_.tiles[static_cast<size_t>(b)].s)
                    north_of_[static_cast<size_t>(a)] |= 1ull << b;
                if (p_.tiles[static_cast<size_t>(a)].s == p_.tiles[static_cast<size_t>(b)].n)
                    south_of_[static_cast<size_t>(a)] |= 1ull << b;
            }
        adjacency_ = true;
    }

    void build_symbol_masks() {
        size_t k = static_cast<size_t>(p_.alphabet_size);
        if (p_.allow_e.size() != k || p_.allow_n.size() != k)
            throw std::invalid_argument("adjacency mask size must match alphabet");
        east_of_ = p_.allow_e;
        north_of_ = p_.allow_n;
        west_of_.assign(k, 0);
        south_of_.assign(k, 0);
        for (size_t a = 0; a < k; ++a)
            for (size_t b = 0; b < k; ++b) {
                if ((east_of_[a] >> b) & 1ull) west_of_[b] |= 1ull << a;
                if ((north_of_[a] >> b) & 1ull) south_of_[b] |= 1ull << a;
            }
        adjacency_ = true;
    }

    void normalize_patterns() {
        max_extent_ = 1;
        for (const Pattern& p : p_.forbidden) {
            if (p.empty()) continue;
            Rect b = p.bbox();
            pats_.push_back(p.shifted(-b.x0, -b.y0));
            max_extent_ = std::max({max_extent_, b.w, b.h});
        }
        // Precompute, per region cell, the placements whose support covers it.
        cover_.assign(static_cast<size_t>(W_ * H_), {});
        for (int pi = 0; pi < static_cast<int>(pats_.size()); ++pi) {
            Rect b = pats_[static_cast<size_t>(pi)].bbox();
            int ax0, ax1, ay0, ay1;
            switch (p_.region.mode) {
                case BoundaryMode::Torus:
                    ax0 = 0; ax1 = W_ - 1; ay0 = 0; ay1 = H_ - 1;
                    break;
                case BoundaryMode::Free:
                    ax0 = 0; ax1 = W_ - b.w; ay0 = 0; ay1 = H_ - b.h;
                    break;
                case BoundaryMode::FixedBorder:
                    ax0 = -1; ax1 = W_ + 1 - b.w; ay0 = -1; ay1 = H_ + 1 - b.h;
                    break;
            }
            for (int ay = ay0; ay <= ay1; ++ay)
                for (int ax = ax0; ax <= ax1; ++ax) {
                    bool usable = true;
                    bool touches_region = false;
                    for (const auto& [c, s] : pats_[static_cast<size_t>(pi)].cells()) {
                        Cell cc{c.x + ax, c.y + ay};
                        if (in_region(cc)) {
                            touches_region = true;
                        } else if (p_.region.mode == BoundaryMode::FixedBorder) {
                            if (!p_.region.border.count(border_key(cc))) { usable = false; break; }
                        } else if (p_.region.mode == BoundaryMode::Free) {
                            usable = false; break;
                        }
                    }
                    if (!usable || !touches_region) continue;
                    for (const auto& [c, s] : pats_[static_cast<size_t>(pi)].cells()) {
                        Cell cc = wrap(Cell{c.x + ax, c.y + ay});
                        if (in_region(cc))
                            cover_[idx(cc)].push_back(Placement{pi, Cell{ax, ay}});
                    }
                }
        }
    }

    // -- geometry helpers --------------------------------------------------

    bool in_region(Cell c) const { return c.x >= 0 && c.x < W_ && c.y >= 0 && c.y < H_; }
    size_t idx(Cell c) const { return static_cast<size_t>(c.y * W_ + c.x); }
    Cell wrap(Cell c) const {
        if (p_.region.mode != BoundaryMode::Torus) return c;
        int x = c.x % W_, y = c.y % H_;
        if (x < 0) x += W_;
        if (y < 0) y += H_;
        return Cell{x, y};
    }
    static Cell border_key(Cell c) { return c; }

    // Known symbol at an arbitrary cell: assigned region cell, or fixed
    // border cell.  kUnassigned when unknown.
    int value_at(Cell c) const {
        Cell cc = wrap(c);
        if (in_region(cc)) return assign_[idx(cc)];
        if (p_.region.mode == BoundaryMode::FixedBorder) {
            auto it = p_.region.border.find(cc);
            if (it != p_.region.border.end()) return it->second;
        }
        return kUnassigned;
    }

    void pin(Cell c, int v) {
        if (!in_region(c)) throw std::invalid_argument("pin outside region");
        if (v < 0 || v >= p_.domain_size()) throw std::invalid_argument("pin value out of range");
        std::uint64_t m = 1ull << v;
        if (!(domain_[idx(c)] & m)) { contradiction_ = true; return; }
        domain_[idx(c)] = m;
        assign_[idx(c)] = v;
    }

    // -- propagation -------------------------------------------------------

    // Candidate mask for one cell given current assignments/domains.
    std::uint64_t revise(Cell c) const {
        std::uint64_t out = 0;
        std::uint64_t dom = domain_[idx(c)];
        for (int s = 0; s < p_.domain_size(); ++s) {
            if (!(dom & (1ull << s))) continue;
            if (feasible(c, s)) out |= 1ull << s;
        }
        return out;
    }

    bool feasible(Cell c, int s) const {
        if (adjacency_ && !adjacency_feasible(c, s)) return false;
        if (p_.wang()) return true;
        // Placing s at c must not complete any forbidden placement.
        for (const Placement& pl : cover_[idx(c)]) {
            const Pattern& pat = pats_[static_cast<size_t>(pl.pattern)];
            bool completes = true;
            for (const auto& [pc, pv] : pat.cells()) {
                Cell cc{pc.x + pl.anchor.x, pc.y + pl.anchor.y};
                int have = (wrap(cc) == wrap(c)) ? s : value_at(cc);
                if (have == kUnassigned || have != pv) { completes = false; break; }
            }
            if (completes) return false;
        }
        return true;
    }

    bool adjacency_feasible(Cell c, int s) const {
        auto ok_dir = [&](Cell nb, const std::vector<std::uint64_t>& allowed) {
            Cell cc = wrap(nb);
            if (!in_region(cc)) {
                if (p_.region.mode == BoundaryMode::FixedBorder) {
                    auto it = p_.region.border.find(cc);
                    if (it != p_.region.border.end())
                        return (allowed[static_cast<size_t>(s)] >> it->second) & 1ull;
                }
                return 1ull;  // free edge
            }
            return (allowed[static_cast<size_t>(s)] & domain_[idx(cc)]) ? 1ull : 0ull;
        };
        return ok_dir(Cell{c.x + 1, c.y}, east_of_) && ok_dir(Cell{c.x - 1, c.y}, west_of_) &&
               ok_dir(Cell{c.x, c.y + 1}, north_of_) && ok_dir(Cell{c.x, c.y - 1}, south_of_);
    }

    void enqueue_neighbors(Cell c) {
        int r = p_.wang() ? 1 : max_extent_;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (dx == 0 && dy == 0) continue;
                Cell n = wrap(Cell{c.x + dx, c.y + dy});
                if (in_region(n) && assign_[idx(n)] == kUnassigned)
                    queue_.push_back(static_cast<int>(idx(n)));
            }
    }

    // AC-3-style fixpoint; records domain changes on the trail.
    bool propagate() {
        while (!queue_.empty()) {
            int ci = queue_.back();
            queue_.pop_back();
            Cell c{ci % W_, ci / W_};
            if (assign_[static_cast<size_t>(ci)] != kUnassigned) {
                // Assigned cells can still fail when a neighbor changed.
                if (!feasible(c, assign_[static_cast<size_t>(ci)])) return false;
                continue;
            }
            std::uint64_t nd = revise(c);
            if (nd != domain_[static_cast<size_t>(ci)]) {
                trail_.push_back({ci, domain_[static_cast<size_t>(ci)]});
                domain_[static_cast<size_t>(ci)] = nd;
                if (nd == 0) return false;
                enqueue_neighbors(c);
            }
        }
        return true;
    }

    // -- search ------------------------------------------------------------

    int select_cell() const {
        int best = -1, best_count = 65;
        for (int i = 0; i < W_ * H_; ++i) {
            if (assign_[static_cast<size_t>(i)] != kUnassigned) continue;
            int c = std::popcount(domain_[static_cast<size_t>(i)]);
            if (c < best_count) { best_count = c; best = i; }
        }
        return best;
    }

    void dfs(const std::function<bool(const Pattern&)>& on_solution) {
        if (stop_) return;
        int ci = select_cell();
        if (ci < 0) {
            Pattern sol;
            for (int y = 0; y < H_; ++y)
                for (int x = 0; x < W_; ++x)
                    sol.set(Cell{x, y}, assign_[static_cast<size_t>(y * W_ + x)]);
            if (p_.final_check && !p_.final_check(sol)) return;
            found_any_ = true;
            if (!on_solution(sol)) stop_ = true;
            return;
        }
        Cell c{ci % W_, ci / W_};
        std::uint64_t dom = domain_[static_cast<size_t>(ci)];
        for (int s = 0; s < p_.domain_size() && !stop_; ++s) {
            if (!(dom & (1ull << s))) continue;
            if (++nodes_ > p_.budget) { budget_hit_ = true; stop_ = true; return; }
            size_t trail_mark = trail_.size();
            trail_.push_back({ci, dom});
            domain_[static_cast<size_t>(ci)] = 1ull << s;
            assign_[static_cast<size_t>(ci)] = s;
            queue_.clear();
            queue_.push_back(ci);
            enqueue_neighbors(c);
            if (propagate()) dfs(on_solution);
            // undo
            assign_[static_cast<size_t>(ci)] = kUnassigned;
            while (trail_.size() > trail_mark) {
                auto [i, old] = trail_.back();
                trail_.pop_back();
                domain_[static_cast<size_t>(i)] = old;
            }
            queue_.clear();
        }
    }

    const TilingProblem& p_;
    int W_, H_;
    std::uint64_t full_mask_ = 0;
    std::vector<int> assign_;
    std::vector<std::uint64_t> domain_;
    std::vector<std::uint64_t> east_of_, west_of_, north_of_, south_of_;
    std::vector<Pattern> pats_;
    std::vector<std::vector<Placement>> cover_;
    int max_extent_ = 1;
    std::vector<int> queue_;
    std::vector<std::pair<int, std::uint64_t>> trail_;
    std::uint64_t nodes_ = 0;
    bool budget_hit_ = false;
    bool adjacency_ = false;
    bool contradiction_ = false;
    bool stop_ = false;
    bool found_any_ = false;
};

}  // namespace

SolveResult solve(const TilingProblem& p) {
    Searcher s(p, {});
    SolveResult out;
    out.status = s.run([&](const Pattern& sol) {
        out.assignment = sol;
        return false;  // stop at first solution
    });
    out.nodes = s.nodes();
    return out;
}

CountResult count(const TilingProblem& p, int threads) {
    if (threads <= 1) {
        Searcher s(p, {});
        CountResult out;
        std::uint64_t n = 0;
        SolveStatus st = s.run([&](const Pattern&) {
            ++n;
            return true;
        });
        out.status = s.budget_hit() ? SolveStatus::Budget : st;
        out.count = n;
        out.nodes = s.nodes();
        return out;
    }
    // Parallel: split on the values of cell (0,0); each worker counts the
    // subproblem with that value pinned.  The total is a value-ordered sum,
    // so the result is independent of scheduling.
    int k = p.domain_size();
    std::vector<CountResult> parts(static_cast<size_t>(k));
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int v = next.fetch_add(1);
            if (v >= k) return;
            TilingProblem sub = p;
            if (sub.pins.count(Cell{0, 0}) && sub.pins[Cell{0, 0}] != v) {
                parts[static_cast<size_t>(v)] = CountResult{SolveStatus::Unsat, 0, 0};
                continue;
            }
            sub.pins[Cell{0, 0}] = v;
            parts[static_cast<size_t>(v)] = count(sub, 1);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    CountResult out;
    out.status = SolveStatus::Unsat;
    for (const CountResult& r : parts) {
        if (r.status == SolveStatus::Budget) out.status = SolveStatus::Budget;
        out.count += r.count;
        out.nodes += r.nodes;
    }
    if (out.status != SolveStatus::Budget && out.count > 0) out.status = SolveStatus::Sat;
    return out;
}

std::vector<Pattern> enumerate_solutions(const TilingProblem& p, std::uint64_t limit) {
    Searcher s(p, {});
    std::vector<Pattern> out;
    s.run([&](const Pattern& sol) {
        out.push_back(sol);
        return out.size() < limit;
    });
    return out;
}

SolveResult complete(const TilingProblem& p, const std::map<Cell, int>& partial) {
    Searcher s(p, partial);
    SolveResult out;
    out.status = s.run([&](const Pattern& sol) {
        out.assignment = sol;
        return false;
    });
    out.nodes = s.nodes();
    return out;
}

std::string to_text(const std::vector<WangTile>& tiles) {
    std::ostringstream os;
    os << "wang " << tiles.size() << '\n';
    for (const WangTile& t : tiles) os << t.n << ' ' << t.e << ' ' << t.s << ' ' << t.w << '\n';
    return os.str();
}

std::vector<WangTile> wang_from_text(std::istream& in) {
    std::string kw;
    int k = 0;
    if (!(in >> kw >> k) || kw != "wang" || k < 0)
        throw std::invalid_argument("wang_from_text: bad header");
    std::vector<WangTile> out;
    out.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        WangTile t;
        if (!(in >> t.n >> t.e >> t.s >> t.w))
            throw std::invalid_argument("wang_from_text: truncated tile list");
        out.push_back(t);
    }
    return out;
}

}  // namespace sft
