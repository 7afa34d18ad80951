#include "doctest.h"

#include "sft/errors.hpp"
#include "sft/grid.hpp"
#include "sft/render.hpp"
#include "sft/squares.hpp"

#include <fstream>
#include <sstream>
#include <string>

using namespace sft;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int count_occurrences(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("a 1x1 pattern renders to exactly one rect") {
    Pattern p;
    p.set(Cell{0, 0}, 1);
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    std::string svg = render_svg(p, spec);
    CHECK(count_occurrences(svg, "<rect") == 1);
    CHECK(svg.find("<svg ") == 0);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("one rect per cell, in scanline order, with the y axis flipped") {
    Pattern p;
    p.set(Cell{0, 0}, 0);
    p.set(Cell{1, 0}, 1);
    p.set(Cell{0, 1}, 1);
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    spec.cell_px = 10;
    std::string svg = render_svg(p, spec);
    CHECK(count_occurrences(svg, "<rect") == 3);
    // North is +y in cell coordinates, so the cell at y=1 sits above the
    // cells at y=0 in the image (smaller SVG y).
    CHECK(svg.find("<rect x=\"0\" y=\"0\"") != std::string::npos);    // cell (0,1)
    CHECK(svg.find("<rect x=\"0\" y=\"10\"") != std::string::npos);   // cell (0,0)
    // Scanline order: the bottom row is emitted first, left to right.
    size_t first = svg.find("<rect x=\"0\" y=\"10\"");
    size_t second = svg.find("<rect x=\"10\" y=\"10\"");
    size_t third = svg.find("<rect x=\"0\" y=\"0\"");
    CHECK(first < second);
    CHECK(second < third);
}

TEST_CASE("rendering is deterministic and a missing palette entry is rejected") {
    Pattern p = make_square(2);
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    CHECK(render_svg(p, spec) == render_svg(p, spec));

    RenderSpec partial;
    partial.palette[0] = "#ffffff";  // symbol 1 missing
    CHECK_THROWS_AS(render_svg(p, partial), PreconditionFailed);

    RenderSpec degenerate = spec;
    degenerate.cell_px = 0;
    CHECK_THROWS_AS(render_svg(p, degenerate), PreconditionFailed);
}

TEST_CASE("violation markers: one per entry, carrying the rule tag") {
    Pattern p = Pattern::uniform(3, 3, 0);
    std::vector<Violation> vs;
    vs.push_back(Violation{Pattern{}, Cell{0, 0}, "rule1"});
    vs.push_back(Violation{Pattern{}, Cell{2, 1}, "rule2"});
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    std::string svg = render_svg(p, spec, vs);
    CHECK(count_occurrences(svg, "<title>") == 2);
    CHECK(svg.find("<title>rule1</title>") != std::string::npos);
    CHECK(svg.find("<title>rule2</title>") != std::string::npos);

    spec.violation_markers = false;
    CHECK(count_occurrences(render_svg(p, spec, vs), "<title>") == 0);
}

TEST_CASE("overlays: square outlines, macro grid, trap zone") {
    Pattern p = make_square(2);  // one complete 2-square
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    spec.square_outlines = true;
    std::string svg = render_svg(p, spec);
    CHECK(count_occurrences(svg, "stroke=\"#1b9e77\"") == 1);

    spec.square_outlines = false;
    spec.macro_grid = 2;
    svg = render_svg(p, spec);
    // 4x4 bbox with pitch 2: vertical lines at x = 0,2,4 cells and the same
    // horizontally.
    CHECK(count_occurrences(svg, "<line") == 6);

    spec.macro_grid = 0;
    spec.trap_zone = Rect{1, 1, 2, 2};
    svg = render_svg(p, spec);
    CHECK(count_occurrences(svg, "fill-opacity=\"0.3\"") == 1);
}

TEST_CASE("periodic configurations render their fundamental domain") {
    PeriodicConfig x = PeriodicConfig::uniform(3, 2, 0);
    RenderSpec spec = RenderSpec::for_alphabet(Alphabet::binary());
    std::string svg = render_svg(x, spec);
    CHECK(count_occurrences(svg, "<rect") == 6);
}

TEST_CASE("the stock palette covers every alphabet symbol") {
    RenderSpec spec = RenderSpec::for_alphabet(arrow_alphabet());
    CHECK(static_cast<int>(spec.palette.size()) == arrow_alphabet().size());
    Pattern p = y1_sample_block();
    CHECK_NOTHROW(render_svg(p, spec));
}

TEST_CASE("golden fixture: the hand-checked sample block") {
    std::string golden = slurp(std::string(SFT_SOURCE_DIR) + "/tests/golden/y1_sample.svg");
    RenderSpec spec = RenderSpec::for_alphabet(arrow_alphabet());

    CHECK(render_svg(y1_sample_block(), spec) == golden);

    // The committed text form of the block parses back to the same image.
    std::ifstream in(std::string(SFT_SOURCE_DIR) + "/data/y1_sample.txt");
    REQUIRE(in.good());
    Pattern parsed = pattern_from_text(in, arrow_alphabet());
    CHECK(parsed == y1_sample_block());
    CHECK(render_svg(parsed, spec) == golden);
}
