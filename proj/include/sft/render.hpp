#ifndef SFT_RENDER_HPP
#define SFT_RENDER_HPP

// Deterministic SVG rendering of patterns and periodic configurations: one
// rect per cell in scanline order, optional overlays (detected square
// outlines, a macrotile grid, trap zones, violation markers).  Output is
// byte-for-byte reproducible for a given input and spec.

#include "sft/errors.hpp"
#include "sft/grid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sft {

struct RenderSpec {
    int cell_px = 16;
    std::map<int, std::string> palette;  // symbol id -> SVG fill color

    bool square_outlines = false;   // outline every complete packed square
    int macro_grid = 0;             // grid pitch in cells; 0 = off
    std::optional<Rect> trap_zone;  // highlighted region, in cell coordinates
    bool violation_markers = true;  // draw the violations passed to render_svg

    // A total palette for the alphabet from a fixed deterministic color list.
    static RenderSpec for_alphabet(const Alphabet& a);
};

// Throws PreconditionFailed when the palette misses a symbol of the input.
std::string render_svg(const Pattern& p, const RenderSpec& spec,
                       const std::vector<Violation>& violations = {});
std::string render_svg(const PeriodicConfig& x, const RenderSpec& spec,
                       const std::vector<Violation>& violations = {});

}  // namespace sft

#endif  // SFT_RENDER_HPP
