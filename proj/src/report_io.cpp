#include "nilprop/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace nilprop {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

// Minimal two-panel SVG: histogram with the normal-density overlay on the
// left, Q-Q scatter with the identity line on the right.
std::string render_svg(const SizeReport& sr) {
    constexpr double kw = 420, kh = 320, margin = 42;
    constexpr double panel = kw - 2 * margin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(2 * kw)
        << "\" height=\"" << int(kh) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";

    // --- histogram panel ---
    const auto& h = sr.histogram;
    double xlo = h.edges.front(), xhi = h.edges.back();
    double ymax = 0.0;
    for (double v : h.density) ymax = std::max(ymax, v);
    for (double v : h.overlay) ymax = std::max(ymax, v);
    ymax *= 1.08;
    auto hx = [&](double x) { return margin + (x - xlo) / (xhi - xlo) * panel; };
    auto hy = [&](double y) { return kh - margin - y / ymax * (kh - 2 * margin); };

    svg << "<g>\n";
    for (std::size_t i = 0; i < h.density.size(); ++i) {
        double x0 = hx(h.edges[i]), x1 = hx(h.edges[i + 1]);
        double y = hy(h.density[i]);
        svg << "<rect x=\"" << fmt(x0, "%.2f") << "\" y=\"" << fmt(y, "%.2f") << "\" width=\""
            << fmt(x1 - x0, "%.2f") << "\" height=\"" << fmt(kh - margin - y, "%.2f")
            << "\" fill=\"#7aa6d5\" stroke=\"#38618c\" stroke-width=\"0.5\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < h.overlay.size(); ++i) {
        double mid = 0.5 * (h.edges[i] + h.edges[i + 1]);
        svg << fmt(hx(mid), "%.2f") << "," << fmt(hy(h.overlay[i]), "%.2f") << " ";
    }
    svg << "\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << kh - margin << "\" x2=\"" << kw - margin
        << "\" y2=\"" << kh - margin << "\" stroke=\"#000\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << kh - margin << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << kw / 2 << "\" y=\"16\" text-anchor=\"middle\">sample size "
        << sr.size << ": standardized means vs N(0,1)</text>\n";
    svg << "</g>\n";

    // --- Q-Q panel ---
    double qlo = sr.qq.front().first, qhi = sr.qq.back().first;
    for (const auto& [t, e] : sr.qq) {
        qlo = std::min({qlo, t, e});
        qhi = std::max({qhi, t, e});
    }
    double pad = 0.05 * (qhi - qlo);
    qlo -= pad;
    qhi += pad;
    auto qx = [&](double x) { return kw + margin + (x - qlo) / (qhi - qlo) * panel; };
    auto qy = [&](double y) { return kh - margin - (y - qlo) / (qhi - qlo) * (kh - 2 * margin); };

    svg << "<g>\n";
    svg << "<line x1=\"" << fmt(qx(qlo), "%.2f") << "\" y1=\"" << fmt(qy(qlo), "%.2f")
        << "\" x2=\"" << fmt(qx(qhi), "%.2f") << "\" y2=\"" << fmt(qy(qhi), "%.2f")
        << "\" stroke=\"#c22\" stroke-width=\"1.5\"/>\n";
    for (const auto& [t, e] : sr.qq)
        svg << "<circle cx=\"" << fmt(qx(t), "%.2f") << "\" cy=\"" << fmt(qy(e), "%.2f")
            << "\" r=\"1.6\" fill=\"#38618c\" fill-opacity=\"0.6\"/>\n";
    svg << "<line x1=\"" << kw + margin << "\" y1=\"" << kh - margin << "\" x2=\""
        << 2 * kw - margin << "\" y2=\"" << kh - margin << "\" stroke=\"#000\"/>\n";
    svg << "<line x1=\"" << kw + margin << "\" y1=\"" << margin << "\" x2=\"" << kw + margin
        << "\" y2=\"" << kh - margin << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << kw + kw / 2 << "\" y=\"16\" text-anchor=\"middle\">"
        << "Q-Q plot (theoretical vs sample quantiles)</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace

std::vector<std::filesystem::path> write_simulation_outputs(
    const SimulationReport& report, const std::filesystem::path& dir, bool with_svg) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    std::ostringstream summary;
    summary << "size,D,p\n";
    for (const auto& sr : report.per_size) {
        std::string k = std::to_string(sr.size);

        std::ostringstream z;
        for (double v : sr.z_values) z << fmt(v) << "\n";
        auto z_path = dir / ("z_values_" + k + ".csv");
        write_file(z_path, z.str());
        written.push_back(z_path);

        std::ostringstream hist;
        hist << "bin_left,bin_right,density,overlay\n";
        for (std::size_t i = 0; i < sr.histogram.density.size(); ++i)
            hist << fmt(sr.histogram.edges[i]) << "," << fmt(sr.histogram.edges[i + 1]) << ","
                 << fmt(sr.histogram.density[i]) << "," << fmt(sr.histogram.overlay[i]) << "\n";
        auto h_path = dir / ("hist_" + k + ".csv");
        write_file(h_path, hist.str());
        written.push_back(h_path);

        std::ostringstream qq;
        qq << "theoretical,empirical\n";
        for (const auto& [t, e] : sr.qq) qq << fmt(t) << "," << fmt(e) << "\n";
        auto q_path = dir / ("qq_" + k + ".csv");
        write_file(q_path, qq.str());
        written.push_back(q_path);

        if (with_svg) {
            auto s_path = dir / ("plots_" + k + ".svg");
            write_file(s_path, render_svg(sr));
            written.push_back(s_path);
        }

        summary << k << "," << fmt(sr.ks_statistic, "%.6f") << ","
                << fmt(sr.p_value, "%.4f") << "\n";
    }

    auto sum_path = dir / "ks_summary.csv";
    write_file(sum_path, summary.str());
    written.push_back(sum_path);
    return written;
}

} // namespace nilprop
