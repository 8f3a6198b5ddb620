#include "fermat/svgplot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace fermat {

namespace {

constexpr int kSize = 1200;

const char* kPalette[12] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a"};

struct Frame {
    double cx = 0, cy = 0, scale = 1;  // world center and pixels per unit

    double x(Cplx z) const { return (z.real() - cx) * scale + kSize / 2.0; }
    double y(Cplx z) const { return kSize / 2.0 - (z.imag() - cy) * scale; }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

Frame fit(const std::vector<Cplx>& pts, double pad) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (Cplx z : pts) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    Frame f;
    f.cx = 0.5 * (x0 + x1);
    f.cy = 0.5 * (y0 + y1);
    double span = std::max({x1 - x0, y1 - y0, 1e-6}) * (1.0 + pad);
    f.scale = kSize / span;
    return f;
}

void header(std::ostringstream& o) {
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
      << "<rect width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& o, const Frame& f) {
    double x0 = f.x(Cplx(0, 0)), y0 = f.y(Cplx(0, 0));
    if (x0 >= 0 && x0 <= kSize)
        o << "<line x1=\"" << fmt(x0) << "\" y1=\"0\" x2=\"" << fmt(x0) << "\" y2=\"" << kSize
          << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (y0 >= 0 && y0 <= kSize)
        o << "<line x1=\"0\" y1=\"" << fmt(y0) << "\" x2=\"" << kSize << "\" y2=\"" << fmt(y0)
          << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
}

void marker(std::ostringstream& o, const Frame& f, Cplx z, const std::string& label,
            const char* color) {
    o << "<circle cx=\"" << fmt(f.x(z)) << "\" cy=\"" << fmt(f.y(z))
      << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    if (!label.empty())
        o << "<text x=\"" << fmt(f.x(z) + 8) << "\" y=\"" << fmt(f.y(z) - 8)
          << "\" font-family=\"monospace\" font-size=\"20\">" << label << "</text>\n";
}

void polyline(std::ostringstream& o, const Frame& f, const std::vector<Cplx>& pts,
              const char* color, double width, const char* opacity = "1") {
    if (pts.size() < 2) return;
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
      << "\" stroke-opacity=\"" << opacity << "\" points=\"";
    // Decimate: skip interior points that move less than a pixel.
    double lx = f.x(pts[0]), ly = f.y(pts[0]);
    o << fmt(lx) << "," << fmt(ly);
    for (size_t k = 1; k < pts.size(); ++k) {
        double x = f.x(pts[k]), y = f.y(pts[k]);
        if (k + 1 < pts.size() && std::abs(x - lx) < 1.0 && std::abs(y - ly) < 1.0) continue;
        o << " " << fmt(x) << "," << fmt(y);
        lx = x;
        ly = y;
    }
    o << "\"/>\n";
}

std::vector<Cplx> strand(const RootTrack& tr, int label) {
    std::vector<Cplx> out;
    out.reserve(tr.positions.size());
    for (const auto& step : tr.positions) out.push_back(step[label]);
    return out;
}

}  // namespace

std::string svg_roots(const std::vector<Cplx>& a_roots) {
    std::ostringstream o;
    header(o);
    Frame f = fit(a_roots, 0.4);
    axes(o, f);
    for (size_t j = 0; j < a_roots.size(); ++j)
        marker(o, f, a_roots[j], "a" + std::to_string(j + 1), kPalette[j % 12]);
    o << "</svg>\n";
    return o.str();
}

std::string svg_tracks(const RootTrack& track, const std::vector<Cplx>&, int path_label) {
    std::ostringstream o;
    header(o);
    std::vector<Cplx> all;
    for (const auto& step : track.positions) all.insert(all.end(), step.begin(), step.end());
    if (all.empty()) all = track.start;
    Frame f = fit(all, 0.25);
    axes(o, f);
    o << "<text x=\"20\" y=\"40\" font-family=\"monospace\" font-size=\"28\">mu_" << path_label
      << "</text>\n";
    int n = int(track.start.size());
    for (int j = 0; j < n; ++j)
        polyline(o, f, strand(track, j), kPalette[j % 12], 1.5, "0.8");
    for (int j = 0; j < n; ++j)
        marker(o, f, track.start[j], "a" + std::to_string(j + 1), kPalette[j % 12]);
    if (track.collided && !track.positions.empty()) {
        // highlight the last tenth of the colliding strands
        size_t steps = track.positions.size();
        size_t from = steps - std::min(steps, std::max<size_t>(2, steps / 10));
        for (int lbl : {track.delta - 1, track.epsilon - 1}) {
            std::vector<Cplx> tail;
            for (size_t s = from; s < steps; ++s) tail.push_back(track.positions[s][lbl]);
            polyline(o, f, tail, "#ff0000", 4);
        }
        Cplx meet = 0.5 * (track.end[track.delta - 1] + track.end[track.epsilon - 1]);
        o << "<circle cx=\"" << fmt(f.x(meet)) << "\" cy=\"" << fmt(f.y(meet))
          << "\" r=\"8\" fill=\"none\" stroke=\"#ff0000\" stroke-width=\"2\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string svg_arcs(const std::vector<RootTrack>& tracks, const std::vector<Cplx>& a_roots) {
    std::ostringstream o;
    header(o);
    std::vector<Cplx> all(a_roots);
    size_t m = std::min<size_t>(tracks.size(), 9);
    for (size_t i = 0; i < m; ++i)
        for (const auto& step : tracks[i].positions) all.insert(all.end(), step.begin(), step.end());
    Frame f = fit(all, 0.25);
    axes(o, f);
    for (size_t i = 0; i < m; ++i) {
        const RootTrack& tr = tracks[i];
        int n = int(tr.start.size());
        for (int j = 0; j < n; ++j) polyline(o, f, strand(tr, j), "#999999", 0.6, "0.35");
        if (tr.collided)
            for (int lbl : {tr.delta - 1, tr.epsilon - 1})
                polyline(o, f, strand(tr, lbl), kPalette[i % 12], 2, "0.9");
    }
    for (size_t j = 0; j < a_roots.size(); ++j)
        marker(o, f, a_roots[j], "a" + std::to_string(j + 1), "#000000");
    o << "</svg>\n";
    return o.str();
}

}  // namespace fermat
