#include "sft/render.hpp"

#include "sft/squares.hpp"

#include <sstream>

namespace sft {

namespace {

const char* kColorList[] = {
    "#ffffff", "#444444", "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231",
    "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
    "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1", "#000075",
    "#808080", "#d2f53c", "#fabed4",
};

void emit_header(std::ostringstream& out, const Rect& box, int s) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << box.w * s
        << "\" height=\"" << box.h * s << "\" viewBox=\"0 0 " << box.w * s << " "
        << box.h * s << "\">\n";
}

// Cell coordinates have north = +y; SVG has y growing downward.
int px_x(const Rect& box, int s, int x) { return (x - box.x0) * s; }
int px_y(const Rect& box, int s, int y) { return (box.y0 + box.h - 1 - y) * s; }

void emit_cells(std::ostringstream& out, const Pattern& p, const RenderSpec& spec,
                const Rect& box) {
    int s = spec.cell_px;
    for (const auto& [c, sym] : p.cells()) {
        auto it = spec.palette.find(sym);
        if (it == spec.palette.end())
            throw PreconditionFailed("palette does not cover symbol " + std::to_string(sym));
        out << "<rect x=\"" << px_x(box, s, c.x) << "\" y=\"" << px_y(box, s, c.y)
            << "\" width=\"" << s << "\" height=\"" << s << "\" fill=\"" << it->second
            << "\"/>\n";
    }
}

void emit_overlays(std::ostringstream& out, const Pattern& p, const RenderSpec& spec,
                   const Rect& box, const std::vector<Violation>& violations) {
    int s = spec.cell_px;
    if (spec.square_outlines) {
        // Non-binary symbols (the arrow alphabet) are outlined through their
        // {0,1} factor image.
        bool binary = true;
        for (const auto& [c, sym] : p.cells()) binary = binary && sym <= 1;
        SquareReport rep = f_check(binary ? p : h_factor(p));
        for (const auto& sq : rep.squares) {
            Rect r = sq.ring_box();
            out << "<rect x=\"" << px_x(box, s, r.x0) << "\" y=\""
                << px_y(box, s, r.y0 + r.h - 1) << "\" width=\"" << r.w * s
                << "\" height=\"" << r.h * s
                << "\" fill=\"none\" stroke=\"#1b9e77\" stroke-width=\"2\"/>\n";
        }
    }
    if (spec.macro_grid > 0) {
        int g = spec.macro_grid * s;
        for (int x = 0; x <= box.w * s; x += g)
            out << "<line x1=\"" << x << "\" y1=\"0\" x2=\"" << x << "\" y2=\""
                << box.h * s << "\" stroke=\"#7570b3\" stroke-width=\"1\"/>\n";
        for (int y = 0; y <= box.h * s; y += g)
            out << "<line x1=\"0\" y1=\"" << y << "\" x2=\"" << box.w * s << "\" y2=\""
                << y << "\" stroke=\"#7570b3\" stroke-width=\"1\"/>\n";
    }
    if (spec.trap_zone) {
        const Rect& r = *spec.trap_zone;
        out << "<rect x=\"" << px_x(box, s, r.x0) << "\" y=\""
            << px_y(box, s, r.y0 + r.h - 1) << "\" width=\"" << r.w * s << "\" height=\""
            << r.h * s << "\" fill=\"#d95f02\" fill-opacity=\"0.3\"/>\n";
    }
    if (spec.violation_markers) {
        for (const auto& v : violations) {
            out << "<rect x=\"" << px_x(box, s, v.pos.x) << "\" y=\""
                << px_y(box, s, v.pos.y) << "\" width=\"" << s << "\" height=\"" << s
                << "\" fill=\"none\" stroke=\"#e7298a\" stroke-width=\"3\"><title>"
                << v.rule << "</title></rect>\n";
        }
    }
}

}  // namespace

RenderSpec RenderSpec::for_alphabet(const Alphabet& a) {
    RenderSpec spec;
    int n = static_cast<int>(sizeof(kColorList) / sizeof(kColorList[0]));
    for (int id = 0; id < a.size(); ++id) spec.palette[id] = kColorList[id % n];
    return spec;
}

std::string render_svg(const Pattern& p, const RenderSpec& spec,
                       const std::vector<Violation>& violations) {
    if (spec.cell_px <= 0) throw PreconditionFailed("cell size must be positive");
    Rect box = p.bbox();
    if (box.w == 0 || box.h == 0) box = Rect{0, 0, 1, 1};
    std::ostringstream out;
    emit_header(out, box, spec.cell_px);
    emit_cells(out, p, spec, box);
    emit_overlays(out, p, spec, box, violations);
    out << "</svg>\n";
    return out.str();
}

std::string render_svg(const PeriodicConfig& x, const RenderSpec& spec,
                       const std::vector<Violation>& violations) {
    return render_svg(x.fundamental_domain(), spec, violations);
}

}  // namespace sft
