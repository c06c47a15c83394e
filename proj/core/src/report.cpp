#include "windatc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace windatc::study {

namespace {

namespace fs = std::filesystem;

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (hour, atc)
};

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_svg(const std::string& path, const std::string& title,
               const std::vector<Series>& series) {
    const int width = 860, height = 480;
    const int ml = 70, mr = 180, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                   "#aec7e8", "#ffbb78"};

    std::ofstream out(path);
    if (!out) throw ReportError("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";

    // axes and ticks
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 6; ++k) {
        double xv = xmin + k * (xmax - xmin) / 6.0;
        double yv = ymin + k * (ymax - ymin) / 6.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << fmt(xv, "%.2f") << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt(yv, "%.1f") << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">hour</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">ATC (MW)</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 12];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) out << fmt(px(x), "%.2f") << "," << fmt(py(y), "%.2f") << " ";
        out << "\"/>\n";
        int ly = mt + 16 * ci;
        out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw + 35 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    if (!out) throw ReportError("failed writing " + path);
}

}  // namespace

std::vector<std::string> emit_outputs(const StudyResult& result, const std::string& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw ReportError("cannot create output directory " + directory + ": " + ec.message());

    std::vector<std::string> written;
    const std::string csv_path = (fs::path(directory) / (result.name + ".csv")).string();
    {
        std::ofstream out(csv_path);
        if (!out) throw ReportError("cannot write " + csv_path);
        out << "study,param,hour,atc_mw,status,iters\n";
        for (const auto& r : result.rows) {
            out << r.study << "," << r.param << "," << fmt(r.hour, "%g") << ","
                << fmt(r.atc_mw) << "," << r.status << "," << r.iterations << "\n";
        }
        if (!out) throw ReportError("failed writing " + csv_path);
    }
    written.push_back(csv_path);
    if (result.rows.empty()) return written;

    // One line per swept parameter value, in first-appearance order.
    std::vector<Series> series;
    std::map<std::string, size_t> by_param;
    for (const auto& r : result.rows) {
        auto [it, inserted] = by_param.emplace(r.param, series.size());
        if (inserted) series.push_back({r.param, {}});
        if (r.status == "converged") series[it->second].points.emplace_back(r.hour, r.atc_mw);
    }

    const std::string svg_path = (fs::path(directory) / (result.name + ".svg")).string();
    write_svg(svg_path, result.name, series);
    written.push_back(svg_path);
    return written;
}

}  // namespace windatc::study
