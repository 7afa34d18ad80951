#include "sft/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace sft {

namespace {

// Smallest bit width able to store every value in [0, max_value].
int width_for(long long max_value) {
    int w = 1;
    while ((1LL << w) <= max_value) ++w;
    return w;
}

long long fdiv(long long a, long long b) {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

}  // namespace

// ---------------------------------------------------------------------------
// ToyMachine

ToyMachine::RunResult ToyMachine::run(long long max_steps) const {
    long long done = 0;
    for (const auto& p : trace(max_steps)) {
        (void)p;
        ++done;
    }
    return RunResult{done < max_steps, done};
}

std::vector<ToyMachine::TracePoint> ToyMachine::trace(long long max_steps) const {
    std::vector<TracePoint> out;
    std::map<long long, int> tape;
    int state = 0;
    long long head = 0;
    for (long long t = 0; t < max_steps; ++t) {
        int read = 0;
        if (auto it = tape.find(head); it != tape.end()) read = it->second;
        if (state < 0 || state >= static_cast<int>(table_.size())) break;
        const auto& step = table_[static_cast<size_t>(state)][static_cast<size_t>(read)];
        if (!step) break;
        tape[head] = step->write;
        head += step->move;
        state = step->state;
        out.push_back(TracePoint{state, head});
    }
    return out;
}

ToyMachine ToyMachine::looping() {
    std::vector<Row> table(1);
    table[0][0] = MachineStep{0, 0, 1};
    table[0][1] = MachineStep{0, 0, 1};
    return ToyMachine(std::move(table));
}

ToyMachine ToyMachine::halting_at(int k) {
    if (k < 1) throw PreconditionFailed("halting_at: k must be >= 1");
    std::vector<Row> table(static_cast<size_t>(k) + 1);
    for (int s = 0; s < k; ++s) {
        table[static_cast<size_t>(s)][0] = MachineStep{s + 1, 0, 1};
        table[static_cast<size_t>(s)][1] = MachineStep{s + 1, 0, 1};
    }
    // state k has no transitions: the machine halts after exactly k steps
    return ToyMachine(std::move(table));
}

// ---------------------------------------------------------------------------
// Zoom parameters and geometry

long long ZoomParams::N(int i) const {
    if (i < i0) throw PreconditionFailed("zoom level below the pixel level");
    long long n = zoom(i);
    if (n < 4) throw PreconditionFailed("zoom values must be at least 4");
    return n;
}

long long level_side(const ZoomParams& zp, int i) {
    if (i < zp.i0) throw PreconditionFailed("level below the pixel level");
    long long L = 1;
    for (int j = zp.i0; j < i; ++j) L *= zp.N(j);
    return L;
}

long long responsibility_side(const ZoomParams& zp, int i) {
    long long R = level_side(zp, i);
    for (int j = zp.i0; j < i; ++j) R += 2 * level_side(zp, j);
    return R;
}

namespace {

long long machine_threshold(const ZoomParams& zp, int level) {
    return level - 1 >= zp.i0 ? zp.N(level - 1) / 2 : 1;
}

int header_length(const ZoomParams& zp, int level) {
    return zp.e + level + 2;  // 0^e 1 0^level 1
}

std::uint32_t trace_word(const ToyMachine::TracePoint& p) {
    return (static_cast<std::uint32_t>(p.state & 0xFFF) << 20) |
           (static_cast<std::uint32_t>(p.head + 0x80000) & 0xFFFFFu);
}

}  // namespace

CellRole Geometry::role(Cell child) const {
    if (trap_zone.contains(child)) return CellRole::Trap;
    if (computation_zone.contains(child)) {
        long long idx = static_cast<long long>(child.y) * children + child.x;
        return idx < tape_words ? CellRole::TapeWord : CellRole::Computation;
    }
    return CellRole::Blank;
}

Geometry geometry(const ZoomParams& zp, int i) {
    Geometry g;
    g.level = i;
    g.L = level_side(zp, i);
    g.R = responsibility_side(zp, i);
    if (i == zp.i0) return g;

    long long N = zp.N(i - 1);
    g.children = N;
    g.computation_zone = Rect{0, 0, static_cast<int>(N), static_cast<int>(N / 2)};
    g.trap_zone = Rect{static_cast<int>(N) - 3, static_cast<int>(N / 2), 2, 2};

    long long tape_bits = header_length(zp, i) + 4 * basic_color_bits(zp, i);
    g.tape_words = static_cast<int>((tape_bits + 31) / 32);
    long long zone_cells = N * (N / 2);
    if (g.tape_words + 1 > zone_cells)
        throw ResourceLimit("computation zone too small for the parameter tape");

    g.wire_map.assign(static_cast<size_t>(N), std::string(static_cast<size_t>(N), '.'));
    for (int y = 0; y < N; ++y)
        for (int x = 0; x < N; ++x) {
            char c = '.';
            switch (g.role(Cell{x, y})) {
                case CellRole::TapeWord: c = 'T'; break;
                case CellRole::Computation: c = 'C'; break;
                case CellRole::Trap: c = 'X'; break;
                case CellRole::Blank: c = '.'; break;
            }
            g.wire_map[static_cast<size_t>(y)][static_cast<size_t>(x)] = c;
        }
    return g;
}

// ---------------------------------------------------------------------------
// Bit codec

namespace {

struct BitWriter {
    std::string bits;
    void put(unsigned long long v, int w) {
        if (w < 64 && v >= (1ULL << w)) throw PreconditionFailed("codec field out of range");
        for (int k = w - 1; k >= 0; --k) bits.push_back(((v >> k) & 1) ? '1' : '0');
    }
    void put_signed(long long v, long long off, int w) {
        if (v < -off || v > off) throw PreconditionFailed("codec coordinate out of range");
        put(static_cast<unsigned long long>(v + off), w);
    }
};

struct BitReader {
    const std::string& b;
    size_t pos = 0;
    unsigned long long get(int w) {
        unsigned long long v = 0;
        for (int k = 0; k < w; ++k) {
            if (pos >= b.size()) throw PreconditionFailed("bitstring too short");
            char c = b[pos++];
            if (c != '0' && c != '1') throw PreconditionFailed("bitstring has non-bit characters");
            v = (v << 1) | static_cast<unsigned long long>(c - '0');
        }
        return v;
    }
    long long get_signed(long long off, int w) {
        return static_cast<long long>(get(w)) - off;
    }
};

// Per-level widths of the size-checking extension.
struct SizedLayout {
    long long L = 1, R = 1;    // this level
    long long Lp = 1, Rp = 1;  // parent level
    int size_bits = 1, pos_bits = 1;    // sizes <= L, coords in [-R, R]
    int psize_bits = 1, ppos_bits = 1;  // parent scales
    int w_self = 0, w_parent = 0, w_msg = 0, w_msgs = 0, w_trap = 0, total = 0;
};

int knowledge_width(int size_bits, int pos_bits) {
    return 2 * (1 + size_bits)            // sizes
         + 2 * (1 + 2 * pos_bits)         // justifications
         + 4 * (1 + 2 * pos_bits + 2)     // corners
         + 2 * (1 + pos_bits + 1);        // sides
}

SizedLayout sized_layout(const ZoomParams& zp, int level) {
    SizedLayout s;
    s.L = level_side(zp, level);
    s.R = responsibility_side(zp, level);
    s.Lp = level_side(zp, level + 1);
    s.Rp = responsibility_side(zp, level + 1);
    s.size_bits = width_for(s.L);
    s.pos_bits = width_for(2 * s.R);
    s.psize_bits = width_for(s.Lp);
    s.ppos_bits = width_for(2 * s.Rp);
    s.w_self = knowledge_width(s.size_bits, s.pos_bits);
    s.w_parent = knowledge_width(s.psize_bits, s.ppos_bits);
    s.w_msg = 1 + 2 * s.ppos_bits + 2;
    s.w_msgs = 16 * s.w_msg;
    s.w_trap = 1 + 12 * s.w_self;
    s.total = 6 * s.w_self + s.w_parent + s.w_msgs + s.w_trap;
    return s;
}

void put_knowledge(BitWriter& w, const std::vector<int>& sizes,
                   const std::vector<Cell>& justs, const std::vector<CornerInfo>& corners,
                   const std::vector<SideInfo>& sides, long long size_cap, long long off,
                   int size_bits, int pos_bits) {
    if (sizes.size() > 2 || justs.size() > 2 || corners.size() > 4 || sides.size() > 2)
        throw PreconditionFailed("knowledge field count out of bounds");
    for (size_t k = 0; k < 2; ++k) {
        w.put(k < sizes.size() ? 1 : 0, 1);
        long long v = k < sizes.size() ? sizes[k] : 0;
        if (v < 0 || v > size_cap) throw PreconditionFailed("square size out of range");
        w.put(static_cast<unsigned long long>(v), size_bits);
    }
    for (size_t k = 0; k < 2; ++k) {
        w.put(k < justs.size() ? 1 : 0, 1);
        Cell c = k < justs.size() ? justs[k] : Cell{0, 0};
        w.put_signed(c.x, off, pos_bits);
        w.put_signed(c.y, off, pos_bits);
    }
    for (size_t k = 0; k < 4; ++k) {
        w.put(k < corners.size() ? 1 : 0, 1);
        CornerInfo c = k < corners.size() ? corners[k] : CornerInfo{};
        w.put_signed(c.pos.x, off, pos_bits);
        w.put_signed(c.pos.y, off, pos_bits);
        w.put(static_cast<unsigned long long>(c.orientation & 3), 2);
    }
    for (size_t k = 0; k < 2; ++k) {
        w.put(k < sides.size() ? 1 : 0, 1);
        SideInfo s = k < sides.size() ? sides[k] : SideInfo{};
        w.put_signed(s.coord, off, pos_bits);
        w.put(s.vertical ? 1 : 0, 1);
    }
}

void get_knowledge(BitReader& r, std::vector<int>& sizes, std::vector<Cell>& justs,
                   std::vector<CornerInfo>& corners, std::vector<SideInfo>& sides,
                   long long off, int size_bits, int pos_bits) {
    sizes.clear(); justs.clear(); corners.clear(); sides.clear();
    for (size_t k = 0; k < 2; ++k) {
        bool present = r.get(1) != 0;
        long long v = static_cast<long long>(r.get(size_bits));
        if (present) sizes.push_back(static_cast<int>(v));
    }
    for (size_t k = 0; k < 2; ++k) {
        bool present = r.get(1) != 0;
        Cell c{static_cast<int>(r.get_signed(off, pos_bits)),
               static_cast<int>(r.get_signed(off, pos_bits))};
        if (present) justs.push_back(c);
    }
    for (size_t k = 0; k < 4; ++k) {
        bool present = r.get(1) != 0;
        CornerInfo c;
        c.pos.x = static_cast<int>(r.get_signed(off, pos_bits));
        c.pos.y = static_cast<int>(r.get_signed(off, pos_bits));
        c.orientation = static_cast<int>(r.get(2));
        if (present) corners.push_back(c);
    }
    for (size_t k = 0; k < 2; ++k) {
        bool present = r.get(1) != 0;
        SideInfo s;
        s.coord = r.get_signed(off, pos_bits);
        s.vertical = r.get(1) != 0;
        if (present) sides.push_back(s);
    }
}

void put_self(BitWriter& w, const SelfKnowledge& sk, const SizedLayout& ly) {
    put_knowledge(w, sk.sizes, sk.justifications, sk.corners, sk.sides, ly.L, ly.R,
                  ly.size_bits, ly.pos_bits);
}

SelfKnowledge get_self(BitReader& r, const SizedLayout& ly) {
    SelfKnowledge sk;
    get_knowledge(r, sk.sizes, sk.justifications, sk.corners, sk.sides, ly.R,
                  ly.size_bits, ly.pos_bits);
    return sk;
}

void put_messages(BitWriter& w, const std::vector<CornerMessage>& ms, const SizedLayout& ly) {
    if (ms.size() > 8) throw PreconditionFailed("too many corner messages");
    for (size_t k = 0; k < 8; ++k) {
        w.put(k < ms.size() ? 1 : 0, 1);
        CornerMessage m = k < ms.size() ? ms[k] : CornerMessage{};
        w.put_signed(m.pos.x, ly.Rp, ly.ppos_bits);
        w.put_signed(m.pos.y, ly.Rp, ly.ppos_bits);
        w.put(static_cast<unsigned long long>(m.direction & 3), 2);
    }
}

std::vector<CornerMessage> get_messages(BitReader& r, const SizedLayout& ly) {
    std::vector<CornerMessage> ms;
    for (size_t k = 0; k < 8; ++k) {
        bool present = r.get(1) != 0;
        CornerMessage m;
        m.pos.x = static_cast<int>(r.get_signed(ly.Rp, ly.ppos_bits));
        m.pos.y = static_cast<int>(r.get_signed(ly.Rp, ly.ppos_bits));
        m.direction = static_cast<int>(r.get(2));
        if (present) ms.push_back(m);
    }
    return ms;
}

}  // namespace

long long basic_color_bits(const ZoomParams& zp, int level) {
    return 2 * width_for(zp.N(level) - 1) + 2 + 32;
}

long long sized_color_bits(const ZoomParams& zp, int level) {
    return basic_color_bits(zp, level) + sized_layout(zp, level).total;
}

std::string encode_macrocolor(const ZoomParams& zp, const MacroColor& c) {
    int loc_bits = width_for(zp.N(c.level) - 1);
    BitWriter w;
    if (c.loc_x < 0 || c.loc_x >= zp.N(c.level) || c.loc_y < 0 || c.loc_y >= zp.N(c.level))
        throw PreconditionFailed("location outside the parent grid");
    w.put(static_cast<unsigned long long>(c.loc_x), loc_bits);
    w.put(static_cast<unsigned long long>(c.loc_y), loc_bits);
    w.put(static_cast<unsigned long long>(c.wire & 3), 2);
    w.put(c.payload, 32);
    if (c.sized) {
        SizedLayout ly = sized_layout(zp, c.level);
        const SizedFields& f = *c.sized;
        put_self(w, f.self, ly);
        put_self(w, f.neighbor, ly);
        for (const auto& d : f.diag_out) put_self(w, d, ly);
        for (const auto& d : f.diag_in) put_self(w, d, ly);
        put_knowledge(w, f.parent.sizes, f.parent.justifications, f.parent.corners,
                      f.parent.sides, ly.Lp, ly.Rp, ly.psize_bits, ly.ppos_bits);
        put_messages(w, f.msg_out, ly);
        put_messages(w, f.msg_in, ly);
        if (f.trap_circle.size() != 0 && f.trap_circle.size() != 12)
            throw PreconditionFailed("trap circle must have 0 or 12 entries");
        w.put(f.trap_circle.empty() ? 0 : 1, 1);
        for (size_t k = 0; k < 12; ++k)
            put_self(w, k < f.trap_circle.size() ? f.trap_circle[k] : SelfKnowledge{}, ly);
    }
    return w.bits;
}

MacroColor decode_macrocolor(const ZoomParams& zp, int level, const std::string& bits,
                             bool sized) {
    long long want = sized ? sized_color_bits(zp, level) : basic_color_bits(zp, level);
    if (static_cast<long long>(bits.size()) != want)
        throw PreconditionFailed("bitstring length does not match the level layout");
    int loc_bits = width_for(zp.N(level) - 1);
    BitReader r{bits};
    MacroColor c;
    c.level = level;
    c.loc_x = static_cast<long long>(r.get(loc_bits));
    c.loc_y = static_cast<long long>(r.get(loc_bits));
    if (c.loc_x >= zp.N(level) || c.loc_y >= zp.N(level))
        throw PreconditionFailed("location outside the parent grid");
    c.wire = static_cast<int>(r.get(2));
    c.payload = static_cast<std::uint32_t>(r.get(32));
    if (sized) {
        SizedLayout ly = sized_layout(zp, level);
        SizedFields f;
        f.self = get_self(r, ly);
        f.neighbor = get_self(r, ly);
        for (auto& d : f.diag_out) d = get_self(r, ly);
        for (auto& d : f.diag_in) d = get_self(r, ly);
        get_knowledge(r, f.parent.sizes, f.parent.justifications, f.parent.corners,
                      f.parent.sides, ly.Rp, ly.psize_bits, ly.ppos_bits);
        f.msg_out = get_messages(r, ly);
        f.msg_in = get_messages(r, ly);
        bool circle = r.get(1) != 0;
        std::vector<SelfKnowledge> entries;
        for (size_t k = 0; k < 12; ++k) entries.push_back(get_self(r, ly));
        if (circle) f.trap_circle = std::move(entries);
        c.sized = std::move(f);
    }
    return c;
}

std::string layout_manifest(const ZoomParams& zp, int min_level, int max_level) {
    std::ostringstream out;
    for (int i = std::max(min_level, zp.i0); i <= max_level; ++i) {
        int loc_bits = width_for(zp.N(i) - 1);
        long long off = 0;
        auto field = [&](const std::string& name, long long width) {
            out << i << " " << name << " " << off << " " << width << "\n";
            off += width;
        };
        field("loc_x", loc_bits);
        field("loc_y", loc_bits);
        field("wire", 2);
        field("computation", 32);
        SizedLayout ly = sized_layout(zp, i);
        field("self", ly.w_self);
        field("neighbor", ly.w_self);
        field("diag_out0", ly.w_self);
        field("diag_out1", ly.w_self);
        field("diag_in0", ly.w_self);
        field("diag_in1", ly.w_self);
        field("parent", ly.w_parent);
        field("msg_out", 8LL * ly.w_msg);
        field("msg_in", 8LL * ly.w_msg);
        field("trap_circle", ly.w_trap);
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// check_basic

namespace {

// Locations of the four colors of the tile at (x, y) in an N-grid:
// vertical colors carry (boundary column, row), horizontal ones
// (column, boundary row), boundaries taken mod N so that facing
// displays of adjacent parents coincide.
struct TileLoc {
    long long x = 0, y = 0;
};

std::optional<TileLoc> consistent_location(const std::array<MacroColor, 4>& c, long long N) {
    const MacroColor& w = c[0];
    const MacroColor& s = c[1];
    const MacroColor& e = c[2];
    const MacroColor& n = c[3];
    if (w.loc_x != s.loc_x || w.loc_y != s.loc_y) return std::nullopt;
    if (e.loc_x != (w.loc_x + 1) % N || e.loc_y != w.loc_y) return std::nullopt;
    if (n.loc_y != (s.loc_y + 1) % N || n.loc_x != s.loc_x) return std::nullopt;
    return TileLoc{w.loc_x, w.loc_y};
}

}  // namespace

CheckResult check_basic(const ZoomParams& zp, const std::string& tape) {
    auto halt = [](const std::string& reason, long long steps = 0) {
        return CheckResult{false, steps, reason};
    };
    // step 1: parse 0^e 1 0^i 1 <colors>
    size_t pos = 0;
    int e = 0, i = 0;
    while (pos < tape.size() && tape[pos] == '0') { ++e; ++pos; }
    if (pos >= tape.size() || tape[pos] != '1') return halt("parsing");
    ++pos;
    while (pos < tape.size() && tape[pos] == '0') { ++i; ++pos; }
    if (pos >= tape.size() || tape[pos] != '1') return halt("parsing");
    ++pos;
    if (e >= i || i < zp.i0) return halt("parsing");
    long long s_i = basic_color_bits(zp, i);
    if (static_cast<long long>(tape.size() - pos) != 4 * s_i) return halt("length");

    // step 2: decode the four colors and check their consistency
    std::array<MacroColor, 4> c;
    try {
        for (int k = 0; k < 4; ++k)
            c[static_cast<size_t>(k)] = decode_macrocolor(
                zp, i, tape.substr(pos + static_cast<size_t>(k) * s_i, static_cast<size_t>(s_i)));
    } catch (const PreconditionFailed&) {
        return halt("color");
    }
    long long N = zp.N(i);
    auto loc = consistent_location(c, N);
    if (!loc) return halt("location");
    long long x = loc->x, y = loc->y;
    // interior edges carry no wire bits
    if ((x > 0 && c[0].wire != 0) || (y > 0 && c[1].wire != 0) ||
        (x < N - 1 && c[2].wire != 0) || (y < N - 1 && c[3].wire != 0))
        return halt("wire");
    // east and north both carry this tile's own computation word
    if (c[2].payload != c[3].payload) return halt("payload");

    // step 3: the word must fit this cell's role in the parent layout,
    // including the visible bits of the parent tape header
    Geometry g = geometry(zp, i + 1);
    std::uint32_t own = c[2].payload;
    switch (g.role(Cell{static_cast<int>(x), static_cast<int>(y)})) {
        case CellRole::Blank:
            if (own != 0) return halt("role-blank");
            break;
        case CellRole::Trap:
            break;
        case CellRole::TapeWord: {
            long long j = y * N + x;
            int hdr = header_length(zp, i + 1);
            long long total = hdr + 4 * basic_color_bits(zp, i + 1);
            for (int k = 0; k < 32; ++k) {
                long long b = 32 * j + k;
                int bit = static_cast<int>((own >> (31 - k)) & 1u);
                if (b < hdr) {
                    int expect = (b == zp.e || b == zp.e + (i + 1) + 1) ? 1 : 0;
                    if (bit != expect) return halt("sync");
                } else if (b >= total && bit != 0) {
                    return halt("sync");
                }
            }
            break;
        }
        case CellRole::Computation: {
            long long zone_idx = y * N + x - g.tape_words;
            auto tr = zp.machine.trace(zone_idx + 1);
            if (static_cast<long long>(tr.size()) < zone_idx + 1)
                return halt("machine", static_cast<long long>(tr.size()));
            if (own != trace_word(tr[static_cast<size_t>(zone_idx)])) return halt("trace");
            break;
        }
    }

    // step 4: the machine itself must keep running past the level threshold
    long long th = machine_threshold(zp, i);
    auto rr = zp.machine.run(th);
    if (rr.halted) return halt("machine", rr.steps);
    return CheckResult{true, th, ""};
}

// ---------------------------------------------------------------------------
// Macrotile assembly

std::string parameter_tape(const ZoomParams& zp, int level, const ColorTuple& top) {
    std::string tape(static_cast<size_t>(zp.e), '0');
    tape += '1';
    tape += std::string(static_cast<size_t>(level), '0');
    tape += '1';
    for (const MacroColor* c : {&top.west, &top.south, &top.east, &top.north}) {
        MacroColor basic = *c;
        basic.sized.reset();
        tape += encode_macrocolor(zp, basic);
    }
    return tape;
}

ColorTuple sample_top(const ZoomParams& zp, int level, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    long long N = zp.N(level);
    long long x = static_cast<long long>(rng() % static_cast<std::uint64_t>(N));
    long long y = static_cast<long long>(rng() % static_cast<std::uint64_t>(N));
    auto color = [&](long long lx, long long ly) {
        MacroColor c;
        c.level = level;
        c.loc_x = lx;
        c.loc_y = ly;
        c.wire = static_cast<int>(rng() % 4);
        c.payload = static_cast<std::uint32_t>(rng());
        return c;
    };
    ColorTuple t;
    t.west = color(x, y);
    t.south = color(x, y);
    t.east = color((x + 1) % N, y);
    t.north = color(x, (y + 1) % N);
    return t;
}

namespace {

std::vector<std::uint32_t> pack_words(const std::string& bits, int words) {
    std::vector<std::uint32_t> out(static_cast<size_t>(words), 0);
    for (size_t b = 0; b < bits.size(); ++b)
        if (bits[b] == '1')
            out[b / 32] |= 1u << (31 - static_cast<int>(b % 32));
    return out;
}

int display_bits(const std::string& bits, long long p) {
    auto bit = [&](long long k) {
        return k < static_cast<long long>(bits.size()) && bits[static_cast<size_t>(k)] == '1';
    };
    return (bit(2 * p) ? 2 : 0) | (bit(2 * p + 1) ? 1 : 0);
}

std::array<std::string, 4> top_displays(const ZoomParams& zp, const ColorTuple& top) {
    auto enc = [&](const MacroColor& c) {
        MacroColor basic = c;
        basic.sized.reset();
        return encode_macrocolor(zp, basic);
    };
    return {enc(top.west), enc(top.south), enc(top.east), enc(top.north)};
}

void require_valid_top(const ZoomParams& zp, int level, const ColorTuple& top) {
    if (top.west.level != level || top.south.level != level || top.east.level != level ||
        top.north.level != level)
        throw PreconditionFailed("top colors are not all of the requested level");
    std::array<MacroColor, 4> c{top.west, top.south, top.east, top.north};
    if (!consistent_location(c, zp.N(level)))
        throw PreconditionFailed("top colors have inconsistent locations");
}

std::string child_tape(const ZoomParams& zp, int level, const ColorTuple& child) {
    return parameter_tape(zp, level - 1, child);
}

}  // namespace

MacroTile assemble(const ZoomParams& zp, int level, const ColorTuple& top) {
    if (level <= zp.i0) throw PreconditionFailed("assembly needs a level above the pixels");
    Geometry g = geometry(zp, level);
    require_valid_top(zp, level, top);
    long long N = g.children;

    std::string tau = parameter_tape(zp, level, top);
    auto words = pack_words(tau, g.tape_words);
    long long run_cells = N * (N / 2) - g.tape_words;
    auto tr = zp.machine.trace(run_cells);
    if (static_cast<long long>(tr.size()) < run_cells) {
        std::ostringstream msg;
        msg << "machine halted after " << tr.size() << " steps; " << run_cells
            << " computation cells cannot be filled";
        throw AssemblyFailed(msg.str());
    }
    auto disp = top_displays(zp, top);

    auto own_payload = [&](long long x, long long y) -> std::uint32_t {
        switch (g.role(Cell{static_cast<int>(x), static_cast<int>(y)})) {
            case CellRole::TapeWord: return words[static_cast<size_t>(y * N + x)];
            case CellRole::Computation:
                return trace_word(tr[static_cast<size_t>(y * N + x - g.tape_words)]);
            default: return 0;
        }
    };

    MacroTile t;
    t.level = level;
    t.side = N;
    t.top = top;
    t.children.resize(static_cast<size_t>(N * N));
    for (long long y = 0; y < N; ++y)
        for (long long x = 0; x < N; ++x) {
            auto color = [&](long long lx, long long ly, int wire, std::uint32_t pl) {
                MacroColor c;
                c.level = level - 1;
                c.loc_x = lx;
                c.loc_y = ly;
                c.wire = wire;
                c.payload = pl;
                return c;
            };
            std::uint32_t own = own_payload(x, y);
            ColorTuple ct;
            ct.west = color(x, y, x == 0 ? display_bits(disp[0], y) : 0,
                            x > 0 ? own_payload(x - 1, y) : 0);
            ct.south = color(x, y, y == 0 ? display_bits(disp[1], x) : 0,
                             y > 0 ? own_payload(x, y - 1) : 0);
            ct.east = color((x + 1) % N, y, x == N - 1 ? display_bits(disp[2], y) : 0, own);
            ct.north = color(x, (y + 1) % N, y == N - 1 ? display_bits(disp[3], x) : 0, own);
            t.child(Cell{static_cast<int>(x), static_cast<int>(y)}) = ct;
        }
    return t;
}

MacroTile assemble(const ZoomParams& zp, int level, const ColorTuple& top,
                   const std::array<ColorTuple, 4>& trap_block) {
    MacroTile t = assemble(zp, level, top);
    Geometry g = geometry(zp, level);
    for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
            const ColorTuple& b = trap_block[static_cast<size_t>(dy * 2 + dx)];
            if (b.west.level != level - 1)
                throw PreconditionFailed("trap block colors must be one level below");
            t.child(Cell{g.trap_zone.x0 + dx, g.trap_zone.y0 + dy}) = b;
        }
    t.has_trap = true;
    return t;
}

std::vector<std::string> check_macrotile(const ZoomParams& zp, const MacroTile& t) {
    std::vector<std::string> problems;
    auto problem = [&](long long x, long long y, const std::string& what) {
        std::ostringstream msg;
        msg << "child (" << x << "," << y << "): " << what;
        problems.push_back(msg.str());
    };
    Geometry g = geometry(zp, t.level);
    long long N = g.children;
    if (t.side != N || static_cast<long long>(t.children.size()) != N * N) {
        problems.push_back("child array does not match the level geometry");
        return problems;
    }
    try {
        require_valid_top(zp, t.level, t.top);
    } catch (const PreconditionFailed& e) {
        problems.push_back(std::string("top: ") + e.what());
    }

    std::string tau = parameter_tape(zp, t.level, t.top);
    auto words = pack_words(tau, g.tape_words);
    long long run_cells = N * (N / 2) - g.tape_words;
    auto tr = zp.machine.trace(run_cells);
    if (static_cast<long long>(tr.size()) < run_cells)
        problems.push_back("machine halts before the computation zone is filled");
    auto disp = top_displays(zp, t.top);
    auto is_trap = [&](long long x, long long y) {
        return t.has_trap && g.trap_zone.contains(Cell{static_cast<int>(x), static_cast<int>(y)});
    };

    for (long long y = 0; y < N; ++y)
        for (long long x = 0; x < N; ++x) {
            const ColorTuple& c = t.child(Cell{static_cast<int>(x), static_cast<int>(y)});
            auto r = check_basic(zp, child_tape(zp, t.level, c));
            if (!r.running) problem(x, y, "checker halts: " + r.reason);
            if (is_trap(x, y)) continue;
            if (c.west.loc_x != x || c.west.loc_y != y || c.south.loc_x != x ||
                c.south.loc_y != y)
                problem(x, y, "location does not match the grid position");
            std::uint32_t own = c.east.payload;
            switch (g.role(Cell{static_cast<int>(x), static_cast<int>(y)})) {
                case CellRole::TapeWord:
                    if (own != words[static_cast<size_t>(y * N + x)])
                        problem(x, y, "tape word differs from the parameter tape");
                    break;
                case CellRole::Computation: {
                    size_t idx = static_cast<size_t>(y * N + x - g.tape_words);
                    if (idx < tr.size() && own != trace_word(tr[idx]))
                        problem(x, y, "computation word differs from the machine trace");
                    break;
                }
                case CellRole::Blank:
                    if (own != 0) problem(x, y, "blank cell carries a payload");
                    break;
                case CellRole::Trap:
                    break;
            }
            if (x == 0 && c.west.wire != display_bits(disp[0], y))
                problem(x, y, "west display differs from the top color");
            if (y == 0 && c.south.wire != display_bits(disp[1], x))
                problem(x, y, "south display differs from the top color");
            if (x == N - 1 && c.east.wire != display_bits(disp[2], y))
                problem(x, y, "east display differs from the top color");
            if (y == N - 1 && c.north.wire != display_bits(disp[3], x))
                problem(x, y, "north display differs from the top color");
        }

    // shared edges: both stored copies must agree; edges into the trap zone
    // are exempt (information flows outward only)
    for (long long y = 0; y < N; ++y)
        for (long long x = 0; x + 1 < N; ++x) {
            if (is_trap(x, y) != is_trap(x + 1, y)) continue;
            const auto& a = t.child(Cell{static_cast<int>(x), static_cast<int>(y)}).east;
            const auto& b = t.child(Cell{static_cast<int>(x + 1), static_cast<int>(y)}).west;
            if (!(a == b)) problem(x, y, "east edge disagrees with the west neighbor copy");
        }
    for (long long y = 0; y + 1 < N; ++y)
        for (long long x = 0; x < N; ++x) {
            if (is_trap(x, y) != is_trap(x, y + 1)) continue;
            const auto& a = t.child(Cell{static_cast<int>(x), static_cast<int>(y)}).north;
            const auto& b = t.child(Cell{static_cast<int>(x), static_cast<int>(y + 1)}).south;
            if (!(a == b)) problem(x, y, "north edge disagrees with the south neighbor copy");
        }
    return problems;
}

std::optional<ColorTuple> reparse(const ZoomParams& zp, const MacroTile& t) {
    Geometry g = geometry(zp, t.level);
    long long N = g.children;
    if (t.side != N || static_cast<long long>(t.children.size()) != N * N) return std::nullopt;
    for (long long y = 0; y < N; ++y)
        for (long long x = 0; x < N; ++x) {
            Cell here{static_cast<int>(x), static_cast<int>(y)};
            if (t.has_trap && g.trap_zone.contains(here)) continue;
            const ColorTuple& c = t.child(here);
            if (c.west.level != t.level - 1) return std::nullopt;
            if (c.west.loc_x != x || c.west.loc_y != y || c.south.loc_x != x ||
                c.south.loc_y != y)
                return std::nullopt;
        }
    std::string bits;
    for (int j = 0; j < g.tape_words; ++j) {
        Cell here{static_cast<int>(j % N), static_cast<int>(j / N)};
        std::uint32_t w = t.child(here).east.payload;
        for (int k = 31; k >= 0; --k) bits.push_back(((w >> k) & 1u) ? '1' : '0');
    }
    size_t pos = 0;
    int e = 0, lvl = 0;
    while (pos < bits.size() && bits[pos] == '0') { ++e; ++pos; }
    if (pos >= bits.size() || bits[pos] != '1') return std::nullopt;
    ++pos;
    while (pos < bits.size() && bits[pos] == '0') { ++lvl; ++pos; }
    if (pos >= bits.size() || bits[pos] != '1') return std::nullopt;
    ++pos;
    if (e != zp.e || lvl != t.level) return std::nullopt;
    long long s = basic_color_bits(zp, t.level);
    if (static_cast<long long>(bits.size() - pos) < 4 * s) return std::nullopt;
    ColorTuple top;
    try {
        MacroColor* slots[4] = {&top.west, &top.south, &top.east, &top.north};
        for (int k = 0; k < 4; ++k) {
            *slots[k] = decode_macrocolor(
                zp, t.level, bits.substr(pos + static_cast<size_t>(k) * s, static_cast<size_t>(s)));
        }
    } catch (const PreconditionFailed&) {
        return std::nullopt;
    }
    for (size_t b = pos + static_cast<size_t>(4 * s); b < bits.size(); ++b)
        if (bits[b] != '0') return std::nullopt;
    return top;
}

VerifyReport verify_simulation(const ZoomParams& zp, int level, int samples,
                               std::uint64_t seed) {
    VerifyReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    std::map<std::string, ColorTuple> seen;
    bool division_checked = false;
    for (int k = 0; k < samples; ++k) {
        ColorTuple top = sample_top(zp, level, rng());
        MacroTile tile;
        try {
            tile = assemble(zp, level, top);
        } catch (const AssemblyFailed& e) {
            rep.failures.push_back("sample " + std::to_string(k) + ": " + e.what());
            continue;
        }
        auto probs = check_macrotile(zp, tile);
        if (!probs.empty()) {
            rep.failures.push_back("sample " + std::to_string(k) + ": " + probs.front());
            continue;
        }
        auto back = reparse(zp, tile);
        if (!back || !(*back == top)) {
            rep.failures.push_back("sample " + std::to_string(k) + ": reparse mismatch");
            continue;
        }
        ++rep.round_trips;
        std::string ser;
        for (const auto& c : tile.children)
            for (const MacroColor* mc : {&c.west, &c.south, &c.east, &c.north})
                ser += encode_macrocolor(zp, *mc);
        if (auto it = seen.find(ser); it != seen.end()) {
            if (!(it->second == top)) rep.injective = false;
        } else {
            seen.emplace(std::move(ser), top);
        }
        if (!division_checked) {
            division_checked = true;
            long long N = tile.side;
            for (long long dy = 0; dy < N && rep.unique_division; ++dy)
                for (long long dx = 0; dx < N; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    bool broken = false;
                    for (long long y = 0; y < N && !broken; ++y)
                        for (long long x = 0; x < N && !broken; ++x) {
                            const auto& c = tile.child(Cell{static_cast<int>(x),
                                                            static_cast<int>(y)});
                            if (c.west.loc_x != (x + dx) % N || c.west.loc_y != (y + dy) % N)
                                broken = true;
                        }
                    if (!broken) {
                        rep.unique_division = false;
                        break;
                    }
                }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// check_sized

namespace {

// Message directions: 0 E, 1 N, 2 W, 3 S.  The two arms of a corner point
// into the quadrant the square occupies.
std::array<int, 2> corner_arms(int orientation) {
    switch (orientation & 3) {
        case 0: return {0, 1};  // NE
        case 1: return {2, 1};  // NW
        case 2: return {0, 3};  // SE
        default: return {2, 3};  // SW
    }
}

bool points_toward(const CornerMessage& m, Cell target) {
    if (m.pos.y == target.y && m.pos.x != target.x)
        return m.direction == (target.x > m.pos.x ? 0 : 2);
    if (m.pos.x == target.x && m.pos.y != target.y)
        return m.direction == (target.y > m.pos.y ? 1 : 3);
    return false;
}

bool contains_size(const std::vector<int>& sizes, int n) {
    return std::find(sizes.begin(), sizes.end(), n) != sizes.end();
}

bool contains_corner(const std::vector<CornerInfo>& cs, const CornerInfo& c) {
    return std::find(cs.begin(), cs.end(), c) != cs.end();
}

bool adjacent_sizes_ok(const std::vector<int>& sizes) {
    if (sizes.size() > 2) return false;
    if (sizes.size() == 2 && std::abs(sizes[0] - sizes[1]) != 1) return false;
    return true;
}

}  // namespace

CheckResult check_sized(const ZoomParams& zp, int level,
                        const std::array<MacroColor, 4>& colors, int trap_side) {
    for (const auto& c : colors)
        if (!c.sized) throw PreconditionFailed("check_sized needs size-checking fields");
    auto halt = [](const std::string& reason) { return CheckResult{false, 0, reason}; };
    std::vector<int> idx;
    for (int k = 0; k < 4; ++k)
        if (k != trap_side) idx.push_back(k);

    const SizedFields& f = *colors[static_cast<size_t>(idx.front())].sized;
    for (int k : idx) {
        const SizedFields& g = *colors[static_cast<size_t>(k)].sized;
        if (!(g.self == f.self)) return halt("self-agreement");
        if (!(g.parent == f.parent)) return halt("parent-agreement");
    }
    long long L = level_side(zp, level);
    for (int n : f.self.sizes)
        if (n < 0 || n > L) return halt("type");
    if (!adjacent_sizes_ok(f.self.sizes)) return halt("type");
    if (!adjacent_sizes_ok(f.parent.sizes)) return halt("parent-type");
    for (int n : f.self.sizes)
        if (!contains_size(f.parent.sizes, n)) return halt("parent-missing-size");
    if (f.self.corners.size() > 4 || f.self.sides.size() > 2 || f.msg_out.size() > 8 ||
        f.msg_in.size() > 8)
        return halt("bounds");

    // corner messages: every partial corner is broadcast along both arms;
    // a matching incoming message resolves it into a size the parent must
    // know, otherwise the parent must keep the corner as partial
    const MacroColor& base = colors[static_cast<size_t>(idx.front())];
    long long N = zp.N(level);
    Cell tile_origin{static_cast<int>(base.loc_x * L), static_cast<int>(base.loc_y * L)};
    for (const CornerInfo& corner : f.self.corners) {
        Cell p{tile_origin.x + corner.pos.x, tile_origin.y + corner.pos.y};
        for (int dir : corner_arms(corner.orientation)) {
            bool sent = false;
            for (const auto& m : f.msg_out)
                if (m.pos == p && m.direction == dir) sent = true;
            if (!sent) return halt("corner-send");
        }
        const CornerMessage* match = nullptr;
        for (const auto& m : f.msg_in)
            if (!(m.pos == p) && points_toward(m, p)) { match = &m; break; }
        CornerInfo parent_corner{p, corner.orientation};
        if (!match) {
            if (!contains_corner(f.parent.corners, parent_corner))
                return halt("corner-unjustified");
            continue;
        }
        long long d = std::abs(static_cast<long long>(match->pos.x - p.x)) +
                      std::abs(static_cast<long long>(match->pos.y - p.y));
        int n = static_cast<int>(d - 1);
        if (n < 0) return halt("corner-size");
        Cell tp{static_cast<int>(fdiv(p.x, L)), static_cast<int>(fdiv(p.y, L))};
        Cell tq{static_cast<int>(fdiv(match->pos.x, L)), static_cast<int>(fdiv(match->pos.y, L))};
        bool near = std::max(std::abs(tp.x - tq.x), std::abs(tp.y - tq.y)) <= 1;
        bool both_children = tp.x >= 0 && tp.x < N && tp.y >= 0 && tp.y < N &&
                             tq.x >= 0 && tq.x < N && tq.y >= 0 && tq.y < N;
        if (near || both_children) {
            if (!contains_size(f.parent.sizes, n)) return halt("corner-size");
            if (contains_corner(f.parent.corners, parent_corner)) return halt("corner-resolved");
        } else if (!contains_size(f.parent.sizes, n) &&
                   !contains_corner(f.parent.corners, parent_corner)) {
            return halt("corner-unjustified");
        }
    }

    // justification order: the parent must cite the least reporter
    for (size_t k = 0; k < f.parent.sizes.size() && k < f.parent.justifications.size(); ++k) {
        int n = f.parent.sizes[k];
        Cell j = f.parent.justifications[k];
        if (contains_size(f.self.sizes, n) && tile_origin < j) return halt("justification-order");
        // the cited reporter must at least hold a size or a corner witness
        if (j == tile_origin && !contains_size(f.self.sizes, n) && f.self.corners.empty())
            return halt("justification-misplaced");
    }

    // trap circle
    if (trap_side >= 0) {
        for (int k : idx) {
            const auto& circle = colors[static_cast<size_t>(k)].sized->trap_circle;
            if (circle.size() != 12) return halt("trap-circle");
            for (const auto& entry : circle)
                if (!(entry == circle.front())) return halt("trap-circle");
            for (int n : circle.front().sizes)
                if (!contains_size(f.parent.sizes, n)) return halt("trap-duty");
        }
    } else {
        for (int k : idx)
            if (!colors[static_cast<size_t>(k)].sized->trap_circle.empty())
                return halt("trap-circle-unexpected");
    }
    return CheckResult{true, 0, ""};
}

// ---------------------------------------------------------------------------
// Responsibility

namespace {

struct BigRect {
    long long x0 = 0, y0 = 0, side = 0;
    bool contains(long long x, long long y) const {
        return x >= x0 && x < x0 + side && y >= y0 && y < y0 + side;
    }
    bool contains_box(long long x, long long y, long long s) const {
        return x >= x0 && y >= y0 && x + s <= x0 + side && y + s <= y0 + side;
    }
};

BigRect zone_rect(const ZoomParams& zp, int i, Cell origin) {
    long long L = level_side(zp, i);
    long long R = responsibility_side(zp, i);
    return BigRect{origin.x - (R - L) / 2, origin.y - (R - L) / 2, R};
}

struct CornerPt {
    long long x = 0, y = 0;
    int orientation = 0;
};

std::array<CornerPt, 4> square_corners(const SquareAt& s) {
    long long d = s.n + 1;
    return {CornerPt{s.corner.x, s.corner.y, 0},
            CornerPt{s.corner.x + d, s.corner.y, 1},
            CornerPt{s.corner.x, s.corner.y + d, 2},
            CornerPt{s.corner.x + d, s.corner.y + d, 3}};
}

bool square_at(const PeriodicConfig& y, Cell c, int n) {
    for (int dy = 0; dy <= n + 1; ++dy)
        for (int dx = 0; dx <= n + 1; ++dx) {
            bool border = dx == 0 || dy == 0 || dx == n + 1 || dy == n + 1;
            if (y.at(c.x + dx, c.y + dy) != (border ? 0 : 1)) return false;
        }
    return true;
}

// All squares whose outer box meets the zone rectangle.  Degenerate
// 0-squares have no interior block and cannot be recognized in the two-symbol
// factor (any all-zero 2x2 window would match), so pattern-level ground truth
// starts at size 1.
std::vector<SquareAt> squares_near(const PeriodicConfig& y, const BigRect& W) {
    std::vector<SquareAt> out;
    long long n_max = std::max({W.side, static_cast<long long>(y.width()),
                                static_cast<long long>(y.height())});
    for (long long n = 1; n <= n_max; ++n)
        for (long long cy = W.y0 - (n + 1); cy < W.y0 + W.side; ++cy)
            for (long long cx = W.x0 - (n + 1); cx < W.x0 + W.side; ++cx) {
                SquareAt s{Cell{static_cast<int>(cx), static_cast<int>(cy)},
                           static_cast<int>(n)};
                if (square_at(y, s.corner, s.n)) out.push_back(s);
            }
    return out;
}

}  // namespace

bool responsible(const ZoomParams& zp, int i, Cell tile_origin, const SquareAt& s) {
    BigRect W = zone_rect(zp, i, tile_origin);
    auto cs = square_corners(s);
    for (int j = zp.i0; j <= i; ++j) {
        long long Lj = level_side(zp, j);
        for (size_t a = 0; a < 4; ++a)
            for (size_t b = a + 1; b < 4; ++b) {
                long long ax = fdiv(cs[a].x, Lj), ay = fdiv(cs[a].y, Lj);
                long long bx = fdiv(cs[b].x, Lj), by = fdiv(cs[b].y, Lj);
                if (std::max(std::abs(ax - bx), std::abs(ay - by)) > 1) continue;
                if (W.contains_box(ax * Lj, ay * Lj, Lj) &&
                    W.contains_box(bx * Lj, by * Lj, Lj))
                    return true;
            }
    }
    return false;
}

bool responsible_cases(const ZoomParams& zp, int i, Cell tile_origin, const SquareAt& s) {
    if (i == zp.i0) return false;
    BigRect W = zone_rect(zp, i, tile_origin);
    long long L = level_side(zp, i);
    long long Lc = level_side(zp, i - 1);
    auto cs = square_corners(s);

    // two corners in children of this tile (possibly non-adjacent children)
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = a + 1; b < 4; ++b) {
            bool a_in = cs[a].x >= tile_origin.x && cs[a].x < tile_origin.x + L &&
                        cs[a].y >= tile_origin.y && cs[a].y < tile_origin.y + L;
            bool b_in = cs[b].x >= tile_origin.x && cs[b].x < tile_origin.x + L &&
                        cs[b].y >= tile_origin.y && cs[b].y < tile_origin.y + L;
            if (a_in && b_in) return true;
        }
    // two adjacent level-(i-1) tiles in the zone, a corner in each
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = a + 1; b < 4; ++b) {
            long long ax = fdiv(cs[a].x, Lc), ay = fdiv(cs[a].y, Lc);
            long long bx = fdiv(cs[b].x, Lc), by = fdiv(cs[b].y, Lc);
            if (std::max(std::abs(ax - bx), std::abs(ay - by)) > 1) continue;
            if (W.contains_box(ax * Lc, ay * Lc, Lc) && W.contains_box(bx * Lc, by * Lc, Lc))
                return true;
        }
    // a responsible level-(i-1) tile in the zone
    long long tx0 = fdiv(W.x0 + Lc - 1, Lc), ty0 = fdiv(W.y0 + Lc - 1, Lc);
    for (long long ty = ty0; ty * Lc + Lc <= W.y0 + W.side; ++ty)
        for (long long tx = tx0; tx * Lc + Lc <= W.x0 + W.side; ++tx)
            if (responsible_cases(zp, i - 1,
                                  Cell{static_cast<int>(tx * Lc), static_cast<int>(ty * Lc)}, s))
                return true;
    return false;
}

// ---------------------------------------------------------------------------
// Ground truth and accuracy

SelfKnowledge ground_truth(const ZoomParams& zp, int i, Cell tile_origin,
                           const PeriodicConfig& y) {
    SelfKnowledge out;
    long long L = level_side(zp, i);
    BigRect W = zone_rect(zp, i, tile_origin);
    auto squares = squares_near(y, W);

    std::set<int> sizes;
    std::vector<SquareAt> mine;
    for (const auto& s : squares)
        if (responsible(zp, i, tile_origin, s)) {
            sizes.insert(s.n);
            mine.push_back(s);
        }
    out.sizes.assign(sizes.begin(), sizes.end());

    if (i > zp.i0) {
        long long Lc = level_side(zp, i - 1);
        for (int n : out.sizes) {
            std::optional<Cell> best;
            auto consider = [&](long long tx, long long ty) {
                Cell rel{static_cast<int>(tx * Lc - tile_origin.x),
                         static_cast<int>(ty * Lc - tile_origin.y)};
                if (!best || rel < *best) best = rel;
            };
            // prefer reporters that are themselves responsible for an n-square
            long long tx0 = fdiv(W.x0 + Lc - 1, Lc), ty0 = fdiv(W.y0 + Lc - 1, Lc);
            for (long long ty = ty0; ty * Lc + Lc <= W.y0 + W.side; ++ty)
                for (long long tx = tx0; tx * Lc + Lc <= W.x0 + W.side; ++tx) {
                    Cell to{static_cast<int>(tx * Lc), static_cast<int>(ty * Lc)};
                    for (const auto& s : mine)
                        if (s.n == n && responsible(zp, i - 1, to, s)) consider(tx, ty);
                }
            if (!best) {
                for (const auto& s : mine) {
                    if (s.n != n) continue;
                    for (const auto& c : square_corners(s)) {
                        long long tx = fdiv(c.x, Lc), ty = fdiv(c.y, Lc);
                        if (W.contains_box(tx * Lc, ty * Lc, Lc)) consider(tx, ty);
                    }
                }
            }
            out.justifications.push_back(best.value_or(Cell{0, 0}));
        }
    }

    // partial corners and through-going sides of squares this tile is not
    // responsible for
    std::set<std::pair<std::pair<int, int>, int>> corner_keys;
    std::set<std::pair<long long, bool>> side_keys;
    for (const auto& s : squares) {
        if (responsible(zp, i, tile_origin, s)) continue;
        for (const auto& c : square_corners(s)) {
            if (c.x >= tile_origin.x && c.x < tile_origin.x + L && c.y >= tile_origin.y &&
                c.y < tile_origin.y + L) {
                Cell rel{static_cast<int>(c.x - tile_origin.x),
                         static_cast<int>(c.y - tile_origin.y)};
                if (corner_keys.insert({{rel.y, rel.x}, c.orientation}).second)
                    out.corners.push_back(CornerInfo{rel, c.orientation});
            }
        }
        long long d = s.n + 1;
        bool covers_rows = s.corner.y <= tile_origin.y && s.corner.y + d >= tile_origin.y + L - 1;
        bool covers_cols = s.corner.x <= tile_origin.x && s.corner.x + d >= tile_origin.x + L - 1;
        for (long long vx : {static_cast<long long>(s.corner.x), s.corner.x + d})
            if (covers_rows && vx >= tile_origin.x && vx < tile_origin.x + L)
                if (side_keys.insert({vx - tile_origin.x, true}).second)
                    out.sides.push_back(SideInfo{vx - tile_origin.x, true});
        for (long long hy : {static_cast<long long>(s.corner.y), s.corner.y + d})
            if (covers_cols && hy >= tile_origin.y && hy < tile_origin.y + L)
                if (side_keys.insert({hy - tile_origin.y, false}).second)
                    out.sides.push_back(SideInfo{hy - tile_origin.y, false});
    }
    auto corner_less = [](const CornerInfo& a, const CornerInfo& b) {
        if (!(a.pos == b.pos)) return a.pos < b.pos;
        return a.orientation < b.orientation;
    };
    std::sort(out.corners.begin(), out.corners.end(), corner_less);
    auto side_less = [](const SideInfo& a, const SideInfo& b) {
        if (a.vertical != b.vertical) return a.vertical < b.vertical;
        return a.coord < b.coord;
    };
    std::sort(out.sides.begin(), out.sides.end(), side_less);
    return out;
}

AccuracyJudgment judge_accuracy(const ZoomParams& zp, int i, Cell tile_origin,
                                const PeriodicConfig& y, const SelfKnowledge& claim) {
    SelfKnowledge truth = ground_truth(zp, i, tile_origin, y);
    if (claim == truth) return AccuracyJudgment{AccuracyJudgment::Verdict::SelfAccurate, ""};
    if (claim.sizes != truth.sizes)
        return AccuracyJudgment{AccuracyJudgment::Verdict::Inaccurate, "sizes"};
    if (claim.corners != truth.corners)
        return AccuracyJudgment{AccuracyJudgment::Verdict::Inaccurate, "corners"};
    if (claim.sides != truth.sides)
        return AccuracyJudgment{AccuracyJudgment::Verdict::Inaccurate, "sides"};
    return AccuracyJudgment{AccuracyJudgment::Verdict::Accurate, "justifications"};
}

std::vector<SizedFields> assemble_sized(const ZoomParams& zp, int i, Cell tile_origin,
                                        const PeriodicConfig& y,
                                        const SelfKnowledge& top_claim) {
    if (i <= zp.i0) throw PreconditionFailed("sized assembly needs a level above the pixels");
    auto j = judge_accuracy(zp, i, tile_origin, y, top_claim);
    if (j.verdict == AccuracyJudgment::Verdict::Inaccurate)
        throw AssemblyFailed("inaccurate self-knowledge: field " + j.reason);

    long long N = zp.N(i - 1);
    long long Lc = level_side(zp, i - 1);
    BigRect W = zone_rect(zp, i, tile_origin);
    ParentKnowledge parent{top_claim.sizes, top_claim.justifications, top_claim.corners,
                           top_claim.sides};

    auto truth_at = [&](long long tx, long long ty) {
        return ground_truth(zp, i - 1,
                            Cell{static_cast<int>(tile_origin.x + tx * Lc),
                                 static_cast<int>(tile_origin.y + ty * Lc)},
                            y);
    };

    // pool of partial corners across the whole zone, parent-relative
    std::vector<CornerInfo> pool;
    long long tx0 = fdiv(W.x0 - tile_origin.x + Lc - 1, Lc);
    long long ty0 = fdiv(W.y0 - tile_origin.y + Lc - 1, Lc);
    for (long long ty = ty0; tile_origin.y + ty * Lc + Lc <= W.y0 + W.side; ++ty)
        for (long long tx = tx0; tile_origin.x + tx * Lc + Lc <= W.x0 + W.side; ++tx) {
            SelfKnowledge gt = truth_at(tx, ty);
            for (const auto& c : gt.corners)
                pool.push_back(CornerInfo{Cell{static_cast<int>(tx * Lc) + c.pos.x,
                                               static_cast<int>(ty * Lc) + c.pos.y},
                                          c.orientation});
        }

    std::vector<SizedFields> out(static_cast<size_t>(N * N));
    for (long long cy = 0; cy < N; ++cy)
        for (long long cx = 0; cx < N; ++cx) {
            SizedFields f;
            f.self = truth_at(cx, cy);
            f.neighbor = truth_at(cx + 1, cy);
            f.diag_out = {truth_at(cx + 1, cy + 1), truth_at(cx - 1, cy - 1)};
            f.diag_in = f.diag_out;
            f.parent = parent;
            Cell child_rel{static_cast<int>(cx * Lc), static_cast<int>(cy * Lc)};
            for (const auto& corner : f.self.corners) {
                Cell p{child_rel.x + corner.pos.x, child_rel.y + corner.pos.y};
                for (int dir : corner_arms(corner.orientation))
                    f.msg_out.push_back(CornerMessage{p, dir});
                for (const auto& q : pool) {
                    if (q.pos == p) continue;
                    if (q.pos.x != p.x && q.pos.y != p.y) continue;
                    int dir;
                    if (q.pos.y == p.y)
                        dir = p.x > q.pos.x ? 0 : 2;
                    else
                        dir = p.y > q.pos.y ? 1 : 3;
                    CornerMessage m{q.pos, dir};
                    if (std::find(f.msg_in.begin(), f.msg_in.end(), m) == f.msg_in.end())
                        f.msg_in.push_back(m);
                }
            }
            out[static_cast<size_t>(cy * N + cx)] = std::move(f);
        }
    return out;
}

}  // namespace sft
