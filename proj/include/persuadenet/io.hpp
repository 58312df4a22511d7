#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "persuadenet/benefit.hpp"
#include "persuadenet/errors.hpp"
#include "persuadenet/game.hpp"
#include "persuadenet/graph.hpp"
#include "persuadenet/persuasion.hpp"

namespace persuadenet {

/// Shortest round-trip decimal form, stable across runs and platforms.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Temp-then-rename write so readers never observe a partial file.
inline void write_text_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

struct TabulatedSamples {
    std::vector<double> x, b_h, b_l;
};

/// Sample table with columns x,b_h,b_l; a leading header row is skipped.
inline TabulatedSamples parse_samples_csv(const std::string& text) {
    TabulatedSamples out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (lineno == 1 && line.find_first_not_of("xbhl_,\r ") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string cell;
        double vals[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ls, cell, ','))
                throw ConfigError("samples line " + std::to_string(lineno) + ": expected 3 columns");
            try {
                vals[c] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("samples line " + std::to_string(lineno) + ": bad number '" +
                                  cell + "'");
            }
        }
        out.x.push_back(vals[0]);
        out.b_h.push_back(vals[1]);
        out.b_l.push_back(vals[2]);
    }
    if (out.x.empty()) throw ConfigError("samples file holds no rows");
    return out;
}

/// One row per equilibrium: class, per-node efforts, both aggregates.
inline std::string equilibria_csv(const Graph& g, const EquilibriumSet& eq, const BenefitPair& bp,
                                  Belief mu) {
    std::ostringstream out;
    out << "class";
    for (int k = 0; k < g.node_count(); ++k) out << ",x_" << k;
    out << ",aggregate_effort,aggregate_benefit\n";
    for (const EffortProfile& p : eq.profiles) {
        out << to_string(classify_equilibrium(g, p, p.e_ref));
        for (double v : p.x) out << ',' << format_double(v);
        out << ',' << format_double(aggregate_effort(p)) << ','
            << format_double(aggregate_benefit(g, p, bp, mu)) << '\n';
    }
    return out.str();
}

inline std::string envelope_csv(const ReducedObjective& ro, const ConcaveEnvelope& env) {
    std::ostringstream out;
    out << "mu,objective,envelope\n";
    for (std::size_t i = 0; i < ro.grid.size(); ++i)
        out << format_double(ro.grid[i]) << ',' << format_double(ro.values[i]) << ','
            << format_double(evaluate(env, ro.grid[i])) << '\n';
    return out.str();
}

/// Row-major sweep values over the policy square.
struct SweepResult {
    int grid_size = 0;
    std::vector<double> p_l, p_h;       // axis values, length grid_size
    std::vector<double> value;          // grid_size * grid_size, p_l-major rows
    std::vector<PolicyClass> cls;
    std::size_t argmax_index = 0;
};

inline std::string sweep_csv(const SweepResult& sw) {
    std::ostringstream out;
    out << "p_l,p_h,expected_objective,class\n";
    for (int i = 0; i < sw.grid_size; ++i)
        for (int j = 0; j < sw.grid_size; ++j) {
            const std::size_t idx =
                static_cast<std::size_t>(i) * static_cast<std::size_t>(sw.grid_size) +
                static_cast<std::size_t>(j);
            out << format_double(sw.p_l[static_cast<std::size_t>(i)]) << ','
                << format_double(sw.p_h[static_cast<std::size_t>(j)]) << ','
                << format_double(sw.value[idx]) << ',' << to_string(sw.cls[idx]) << '\n';
        }
    return out.str();
}

namespace detail {
/// Two-stop linear color ramp, dark blue to yellow, t in [0,1].
inline std::string ramp_color(double t) {
    t = std::min(1.0, std::max(0.0, t));
    const int r = static_cast<int>(20.0 + t * (253.0 - 20.0));
    const int g = static_cast<int>(42.0 + t * (231.0 - 42.0));
    const int b = static_cast<int>(110.0 + t * (37.0 - 110.0));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return std::string(buf);
}
}  // namespace detail

/// Self-contained heat map of the sweep with the policy loci drawn on top:
/// the uninformative antidiagonal, the truthful-state edges, and the fully
/// revealing corners. Color scale legend on the right.
inline std::string sweep_svg(const SweepResult& sw, const std::string& title) {
    const int n = sw.grid_size;
    const double plot = 500.0, margin = 60.0, legend_w = 50.0;
    const double width = margin * 2 + plot + legend_w + 40.0, height = margin * 2 + plot;
    double vmin = sw.value[0], vmax = sw.value[0];
    for (double v : sw.value) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;
    const double cell = plot / n;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << margin << "\" y=\"" << margin - 30.0
      << "\" font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // cells: x axis is p_l, y axis is p_h with p_h = 1 at the top
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(j);
            const double t = (sw.value[idx] - vmin) / span;
            const double x = margin + i * cell;
            const double y = margin + plot - (j + 1) * cell;
            s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell + 0.5
              << "\" height=\"" << cell + 0.5 << "\" fill=\"" << detail::ramp_color(t) << "\"/>\n";
        }
    const auto px = [&](double pl) { return margin + pl * plot; };
    const auto py = [&](double ph) { return margin + plot - ph * plot; };
    // no-disclosure antidiagonal p_h + p_l = 1
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(1) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(0) << "\" stroke=\"white\" stroke-width=\"2\" stroke-dasharray=\"8 5\"/>\n";
    // exaggeration edges p_h in {0,1}
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(1) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(1) << "\" stroke=\"#ffb000\" stroke-width=\"3\"/>\n";
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(0) << "\" stroke=\"#ffb000\" stroke-width=\"3\" stroke-opacity=\"0.6\"/>\n";
    // downplay edges p_l in {0,1}
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
      << py(1) << "\" stroke=\"#23a127\" stroke-width=\"3\" stroke-opacity=\"0.6\"/>\n";
    s << "<line x1=\"" << px(1) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
      << py(1) << "\" stroke=\"#23a127\" stroke-width=\"3\"/>\n";
    // full-disclosure corners
    for (const auto& [cx, cy] : {std::pair<double, double>{0.0, 0.0}, {1.0, 1.0}})
        s << "<circle cx=\"" << px(cx) << "\" cy=\"" << py(cy)
          << "\" r=\"6\" fill=\"#d62728\"/>\n";
    // argmax marker
    {
        const std::size_t gi = sw.argmax_index / static_cast<std::size_t>(n);
        const std::size_t gj = sw.argmax_index % static_cast<std::size_t>(n);
        s << "<circle cx=\"" << px(sw.p_l[gi]) << "\" cy=\"" << py(sw.p_h[gj])
          << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    // axes
    s << "<text x=\"" << margin + plot / 2 << "\" y=\"" << height - 15.0
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">p_l</text>\n";
    s << "<text x=\"" << 18.0 << "\" y=\"" << margin + plot / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << margin + plot / 2 << ")\">p_h</text>\n";
    for (double v : {0.0, 0.5, 1.0}) {
        s << "<text x=\"" << px(v) << "\" y=\"" << margin + plot + 18.0
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << v
          << "</text>\n";
        s << "<text x=\"" << margin - 8.0 << "\" y=\"" << py(v) + 4.0
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << v
          << "</text>\n";
    }
    // legend
    const double lx = margin + plot + 30.0;
    for (int i = 0; i < 100; ++i) {
        const double t = (99 - i) / 99.0;
        s << "<rect x=\"" << lx << "\" y=\"" << margin + i * (plot / 100.0) << "\" width=\"18\" height=\""
          << plot / 100.0 + 0.5 << "\" fill=\"" << detail::ramp_color(t) << "\"/>\n";
    }
    s << "<text x=\"" << lx + 24.0 << "\" y=\"" << margin + 10.0
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(vmax) << "</text>\n";
    s << "<text x=\"" << lx + 24.0 << "\" y=\"" << margin + plot
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(vmin) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

/// Line chart of sampled curves sharing an x axis; used for the belief-indexed
/// effort and objective plots.
inline std::string line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::vector<double>& xs,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const double plot_w = 560.0, plot_h = 360.0, margin = 60.0;
    const double width = plot_w + 2 * margin + 120.0, height = plot_h + 2 * margin;
    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const auto& [name, ys] : series)
        for (double v : ys) {
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin) ymax = ymin + 1.0;
    const double xmin = xs.front(), xmax = xs.back();
    const auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto py = [&](double y) { return margin + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << margin << "\" y=\"" << margin - 25.0
      << "\" font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#999\"/>\n";
    int ci = 0;
    for (const auto& [name, ys] : series) {
        s << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) s << px(xs[i]) << ',' << py(ys[i]) << ' ';
        s << "\"/>\n";
        s << "<text x=\"" << margin + plot_w + 10.0 << "\" y=\"" << margin + 20.0 + 18.0 * ci
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colors[ci % 4] << "\">"
          << name << "</text>\n";
        ++ci;
    }
    s << "<text x=\"" << margin + plot_w / 2 << "\" y=\"" << height - 12.0
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
    for (double t : {0.0, 0.5, 1.0}) {
        const double xv = xmin + t * (xmax - xmin);
        const double yv = ymin + t * (ymax - ymin);
        s << "<text x=\"" << px(xv) << "\" y=\"" << margin + plot_h + 18.0
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
          << format_double(xv) << "</text>\n";
        s << "<text x=\"" << margin - 8.0 << "\" y=\"" << py(yv) + 4.0
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
          << format_double(yv) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace persuadenet
