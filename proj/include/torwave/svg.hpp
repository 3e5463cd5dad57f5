#pragma once

// Two-color sign raster of a sampled field with the zero set overlaid.
// Rows are run-length encoded into rects; output bytes depend only on the
// grid contents, so identical inputs give identical files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "torwave/errors.hpp"
#include "torwave/grid.hpp"
#include "torwave/nodal.hpp"

namespace torwave {

inline std::string render_svg_string(const FieldGrid& grid) {
    grid.validate();
    const int n = grid.n;
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\" shape-rendering=\"crispEdges\">\n",
                  n, n, n, n);
    out << buf;
    const char* pos_color = "#f4ead6";
    const char* neg_color = "#34675c";
    // One rect per run of equal sign; SVG y axis points down, so row j is
    // drawn at height n-1-j.
    for (int j = 0; j < n; ++j) {
        int i = 0;
        while (i < n) {
            const bool p = detail::positive_phase(grid.at(i, j));
            int run = 1;
            while (i + run < n &&
                   detail::positive_phase(grid.at(i + run, j)) == p)
                ++run;
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"1\" fill=\"%s\"/>\n",
                          i, n - 1 - j, run, p ? pos_color : neg_color);
            out << buf;
            i += run;
        }
    }
    out << "<path stroke=\"#1c1c1c\" stroke-width=\"0.08\" fill=\"none\" d=\"";
    for (const auto& s : marching_segments(grid)) {
        std::snprintf(buf, sizeof buf, "M%.3f %.3f L%.3f %.3f ",
                      s.x1, static_cast<double>(n) - s.y1,
                      s.x2, static_cast<double>(n) - s.y2);
        out << buf;
    }
    out << "\"/>\n</svg>\n";
    return out.str();
}

inline void render_svg(const FieldGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("render_svg: cannot open " + path);
    const std::string body = render_svg_string(grid);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw IoError("render_svg: write failed for " + path);
}

// Display copy with every stride-th sample, for rendering grids whose full
// resolution would produce absurd files. Analysis always runs on the full
// grid; this is presentation only.
inline FieldGrid decimate_for_display(const FieldGrid& grid, int max_side = 512) {
    grid.validate();
    if (grid.n <= max_side) return grid;
    const int stride = (grid.n + max_side - 1) / max_side;
    FieldGrid out;
    out.n = grid.n / stride;
    out.topology = grid.topology;
    out.spacing = grid.spacing * stride;
    out.values.resize(static_cast<std::size_t>(out.n) * out.n);
    for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j)
            out.at(i, j) = grid.at(i * stride, j * stride);
    return out;
}

} // namespace torwave
