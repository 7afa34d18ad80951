#include "sft/grid.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace sft {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::string name, std::vector<std::string> symbol_names)
    : name_(std::move(name)) {
    symbols_.reserve(symbol_names.size());
    for (size_t i = 0; i < symbol_names.size(); ++i) {
        if (by_name_.count(symbol_names[i]))
            throw std::invalid_argument("duplicate symbol name: " + symbol_names[i]);
        by_name_[symbol_names[i]] = static_cast<int>(i);
        symbols_.push_back(Symbol{static_cast<int>(i), std::move(symbol_names[i])});
    }
}

int Alphabet::id_of(const std::string& symbol_name) const {
    auto it = by_name_.find(symbol_name);
    if (it == by_name_.end())
        throw std::out_of_range("unknown symbol '" + symbol_name + "' in alphabet " + name_);
    return it->second;
}

bool Alphabet::has(const std::string& symbol_name) const {
    return by_name_.count(symbol_name) != 0;
}

Alphabet Alphabet::binary() { return Alphabet("binary", {"0", "1"}); }

// ---------------------------------------------------------------------------
// Pattern

int Pattern::at(Cell c) const {
    auto it = cells_.find(c);
    if (it == cells_.end()) throw std::out_of_range("cell not in pattern support");
    return it->second;
}

std::optional<int> Pattern::get(Cell c) const {
    auto it = cells_.find(c);
    if (it == cells_.end()) return std::nullopt;
    return it->second;
}

Rect Pattern::bbox() const {
    if (cells_.empty()) return Rect{};
    int xmin = cells_.begin()->first.x, xmax = xmin;
    int ymin = cells_.begin()->first.y, ymax = ymin;
    for (const auto& [c, s] : cells_) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y);
        ymax = std::max(ymax, c.y);
    }
    return Rect{xmin, ymin, xmax - xmin + 1, ymax - ymin + 1};
}

int Pattern::diameter() const {
    Rect b = bbox();
    return std::max(b.w, b.h);
}

Pattern Pattern::shifted(int dx, int dy) const {
    Pattern out;
    for (const auto& [c, s] : cells_) out.set(Cell{c.x + dx, c.y + dy}, s);
    return out;
}

bool Pattern::matches_at(const Pattern& other, int dx, int dy) const {
    for (const auto& [c, s] : cells_) {
        auto v = other.get(Cell{c.x + dx, c.y + dy});
        if (!v || *v != s) return false;
    }
    return true;
}

Pattern Pattern::rectangle(int w, int h, const std::vector<int>& row_major) {
    if (static_cast<int>(row_major.size()) != w * h)
        throw std::invalid_argument("rectangle: cell count mismatch");
    Pattern out;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.set(Cell{x, y}, row_major[static_cast<size_t>(y * w + x)]);
    return out;
}

Pattern Pattern::uniform(int w, int h, int symbol_id) {
    return rectangle(w, h, std::vector<int>(static_cast<size_t>(w * h), symbol_id));
}

// ---------------------------------------------------------------------------
// PeriodicConfig

PeriodicConfig::PeriodicConfig(int w, int h, std::vector<int> row_major_cells)
    : w_(w), h_(h), cells_(std::move(row_major_cells)) {
    if (w < 1 || h < 1) throw std::invalid_argument("period must be >= 1");
    if (static_cast<int>(cells_.size()) != w * h)
        throw std::invalid_argument("periodic config: cell count mismatch");
}

static int positive_mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

int PeriodicConfig::at(int x, int y) const {
    return cells_[static_cast<size_t>(positive_mod(y, h_) * w_ + positive_mod(x, w_))];
}

void PeriodicConfig::set(int x, int y, int symbol_id) {
    cells_[static_cast<size_t>(positive_mod(y, h_) * w_ + positive_mod(x, w_))] = symbol_id;
}

Pattern PeriodicConfig::fundamental_domain() const {
    return window(Rect{0, 0, w_, h_});
}

Pattern PeriodicConfig::window(const Rect& r) const {
    Pattern out;
    for (int y = r.y0; y < r.y0 + r.h; ++y)
        for (int x = r.x0; x < r.x0 + r.w; ++x) out.set(Cell{x, y}, at(x, y));
    return out;
}

PeriodicConfig PeriodicConfig::uniform(int w, int h, int symbol_id) {
    return PeriodicConfig(w, h, std::vector<int>(static_cast<size_t>(w * h), symbol_id));
}

// ---------------------------------------------------------------------------
// Occurrence

bool appears_in(const Pattern& w, const PeriodicConfig& x) {
    if (w.empty()) return true;
    Rect b = w.bbox();
    // Anchor offsets ranging over one period are exhaustive: any occurrence is
    // equivalent, modulo the periods, to one with its bbox corner in [0,w)x[0,h).
    for (int dy = 0; dy < x.height(); ++dy) {
        for (int dx = 0; dx < x.width(); ++dx) {
            bool ok = true;
            for (const auto& [c, s] : w.cells()) {
                if (x.at(c.x - b.x0 + dx, c.y - b.y0 + dy) != s) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

bool coexist(const Pattern& w, const Pattern& v, const PeriodicConfig& x) {
    return appears_in(w, x) && appears_in(v, x);
}

// ---------------------------------------------------------------------------
// Forbidden sets

std::vector<Violation> RuleGenerator::check(const PeriodicConfig& x, int d) const {
    std::vector<Violation> out;
    for (const Pattern& p : enumerate(d)) {
        if (p.empty()) continue;
        Rect b = p.bbox();
        for (int dy = 0; dy < x.height(); ++dy) {
            for (int dx = 0; dx < x.width(); ++dx) {
                bool ok = true;
                for (const auto& [c, s] : p.cells()) {
                    if (x.at(c.x - b.x0 + dx, c.y - b.y0 + dy) != s) {
                        ok = false;
                        break;
                    }
                }
                if (ok) out.push_back(Violation{p, Cell{dx, dy}, name()});
            }
        }
    }
    return out;
}

std::vector<Pattern> ForbiddenSet::enumerate(int d) const {
    std::vector<Pattern> out;
    for (const Pattern& p : explicit_)
        if (p.diameter() <= d) out.push_back(p);
    for (const auto& g : generators_) {
        auto v = g->enumerate(d);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

int ForbiddenSet::max_explicit_diameter() const {
    int d = 0;
    for (const Pattern& p : explicit_) d = std::max(d, p.diameter());
    return d;
}

std::vector<Violation> violates(const ForbiddenSet& F, const PeriodicConfig& x, int d) {
    if (d < F.max_explicit_diameter())
        throw BoundTooSmall("violates: bound below max explicit pattern diameter");
    std::vector<Violation> out;
    for (const Pattern& p : F.explicit_patterns()) {
        if (p.empty()) continue;
        Rect b = p.bbox();
        for (int dy = 0; dy < x.height(); ++dy) {
            for (int dx = 0; dx < x.width(); ++dx) {
                bool ok = true;
                for (const auto& [c, s] : p.cells()) {
                    if (x.at(c.x - b.x0 + dx, c.y - b.y0 + dy) != s) {
                        ok = false;
                        break;
                    }
                }
                if (ok) out.push_back(Violation{p, Cell{dx, dy}, "explicit"});
            }
        }
    }
    for (const auto& g : F.generators()) {
        auto v = g->check(x, d);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text formats

std::string to_text(const Pattern& p, const Alphabet& a) {
    std::ostringstream os;
    os << "pattern " << a.name() << ' ' << p.size() << '\n';
    for (const auto& [c, s] : p.cells())
        os << c.x << ' ' << c.y << ' ' << a.symbol_name(s) << '\n';
    return os.str();
}

std::string to_text(const PeriodicConfig& x, const Alphabet& a) {
    std::ostringstream os;
    os << "periodic " << x.width() << ' ' << x.height() << '\n';
    for (int y = 0; y < x.height(); ++y) {
        for (int xx = 0; xx < x.width(); ++xx) {
            if (xx) os << ' ';
            os << a.symbol_name(x.at(xx, y));
        }
        os << '\n';
    }
    return os.str();
}

Pattern pattern_from_text(std::istream& in, const Alphabet& a) {
    std::string kw, alpha;
    int n = 0;
    if (!(in >> kw >> alpha >> n) || kw != "pattern")
        throw std::invalid_argument("pattern_from_text: bad header");
    if (alpha != a.name())
        throw std::invalid_argument("pattern_from_text: alphabet mismatch: " + alpha);
    Pattern out;
    for (int i = 0; i < n; ++i) {
        int x, y;
        std::string sym;
        if (!(in >> x >> y >> sym))
            throw std::invalid_argument("pattern_from_text: truncated cell list");
        out.set(Cell{x, y}, a.id_of(sym));
    }
    return out;
}

PeriodicConfig periodic_from_text(std::istream& in, const Alphabet& a) {
    std::string kw;
    int w = 0, h = 0;
    if (!(in >> kw >> w >> h) || kw != "periodic" || w < 1 || h < 1)
        throw std::invalid_argument("periodic_from_text: bad header");
    std::vector<int> cells;
    cells.reserve(static_cast<size_t>(w * h));
    for (int i = 0; i < w * h; ++i) {
        std::string sym;
        if (!(in >> sym)) throw std::invalid_argument("periodic_from_text: truncated cells");
        cells.push_back(a.id_of(sym));
    }
    return PeriodicConfig(w, h, std::move(cells));
}

}  // namespace sft
