#include "dbcsp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dbcsp/csp.hpp"
#include "dbcsp/errors.hpp"

namespace dbcsp::svg {

namespace {

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return buffer;
}

std::string fmt_tick(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

/// Min/max padded by 5% on each side; degenerate ranges get a unit pad.
Range padded_range(double lo, double hi) {
    if (hi < lo) std::swap(lo, hi);
    double pad = 0.05 * (hi - lo);
    if (pad == 0.0) pad = (lo == 0.0) ? 1.0 : 0.05 * std::abs(lo);
    return {lo - pad, hi + pad};
}

} // namespace

std::string xml_escape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char ch : raw) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double stroke_width) {
    body_ += "  <line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
             "\" y2=\"" + fmt(y2) + "\" stroke=\"" + xml_escape(stroke) + "\" stroke-width=\"" +
             fmt(stroke_width) + "\"/>\n";
}

void Document::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::string& stroke, double stroke_width, bool dashed) {
    if (xs.size() != ys.size() || xs.empty()) {
        throw ArgumentError("polyline needs matching non-empty coordinate lists");
    }
    std::string points;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) points += ' ';
        points += fmt(xs[i]) + "," + fmt(ys[i]);
    }
    body_ += "  <polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
             xml_escape(stroke) + "\" stroke-width=\"" + fmt(stroke_width) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6,4\"";
    body_ += "/>\n";
}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    const std::string& stroke, const std::string& css_class) {
    body_ += "  <rect";
    if (!css_class.empty()) body_ += " class=\"" + xml_escape(css_class) + "\"";
    body_ += " x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
             fmt(h) + "\" fill=\"" + xml_escape(fill) + "\" stroke=\"" + xml_escape(stroke) +
             "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "  <circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
             "\" fill=\"" + xml_escape(fill) + "\"/>\n";
}

void Document::text(double x, double y, const std::string& content, double size,
                    const std::string& anchor) {
    body_ += "  <text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + fmt(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + xml_escape(anchor) + "\">" +
             xml_escape(content) + "</text>\n";
}

std::string Document::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt(width_) + "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) +
           " " + fmt(height_) + "\">\n" + body_ + "</svg>\n";
}

void Document::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write SVG file: " + path.string());
    }
    out << str();
    if (!out) {
        throw DataError("write failed: " + path.string());
    }
}

void line_panel(Document& doc, double x, double y, double w, double h,
                const std::string& title, const std::vector<Series>& series, bool legend) {
    if (series.empty()) {
        throw ArgumentError("line panel needs at least one series");
    }
    double lo = series.front().values.front();
    double hi = lo;
    std::size_t samples = 0;
    for (const Series& s : series) {
        if (s.values.empty()) throw ArgumentError("series must be non-empty");
        samples = std::max(samples, s.values.size());
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const Range range = padded_range(lo, hi);

    const double left = x + 52.0;
    const double top = y + 26.0;
    const double plot_w = w - 64.0;
    const double plot_h = h - 50.0;
    const auto map_x = [&](double t) {
        return samples > 1 ? left + plot_w * t / static_cast<double>(samples - 1) : left;
    };
    const auto map_y = [&](double v) {
        return top + plot_h * (range.hi - v) / (range.hi - range.lo);
    };

    doc.rect(left, top, plot_w, plot_h, "white", "#333333");
    doc.text(x + w / 2.0, y + 16.0, title, 13.0, "middle");
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = range.lo + (range.hi - range.lo) * tick / 4.0;
        const double ty = map_y(v);
        doc.line(left - 4.0, ty, left, ty, "#333333");
        doc.text(left - 7.0, ty + 3.5, fmt_tick(v), 9.0, "end");
    }
    const double x_lo = 0.0;
    const double x_hi = samples > 1 ? static_cast<double>(samples - 1) : 1.0;
    for (int tick = 0; tick <= 4; ++tick) {
        const double t = x_lo + (x_hi - x_lo) * tick / 4.0;
        const double tx = map_x(t);
        doc.line(tx, top + plot_h, tx, top + plot_h + 4.0, "#333333");
        doc.text(tx, top + plot_h + 15.0, fmt_tick(t), 9.0, "middle");
    }

    for (const Series& s : series) {
        std::vector<double> xs(s.values.size());
        std::vector<double> ys(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            xs[i] = map_x(static_cast<double>(i));
            ys[i] = map_y(s.values[i]);
        }
        doc.polyline(xs, ys, s.color, 1.2, s.dashed);
    }

    if (legend) {
        double ly = top + 12.0;
        const double lx = left + plot_w - 110.0;
        for (const Series& s : series) {
            doc.line(lx, ly - 3.5, lx + 22.0, ly - 3.5, s.color, 1.5);
            doc.text(lx + 28.0, ly, s.label, 10.0);
            ly += 14.0;
        }
    }
}

void box_panel(Document& doc, double x, double y, double w, double h,
               const std::string& title, const std::vector<Box>& boxes) {
    if (boxes.empty()) {
        throw ArgumentError("box panel needs at least one box");
    }
    double lo = boxes.front().values.front();
    double hi = lo;
    for (const Box& b : boxes) {
        if (b.values.empty()) throw ArgumentError("box values must be non-empty");
        for (double v : b.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const Range range = padded_range(lo, hi);

    const double left = x + 52.0;
    const double top = y + 26.0;
    const double plot_w = w - 64.0;
    const double plot_h = h - 50.0;
    const auto map_y = [&](double v) {
        return top + plot_h * (range.hi - v) / (range.hi - range.lo);
    };

    doc.rect(left, top, plot_w, plot_h, "white", "#333333");
    doc.text(x + w / 2.0, y + 16.0, title, 13.0, "middle");
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = range.lo + (range.hi - range.lo) * tick / 4.0;
        const double ty = map_y(v);
        doc.line(left - 4.0, ty, left, ty, "#333333");
        doc.text(left - 7.0, ty + 3.5, fmt_tick(v), 9.0, "end");
    }

    const double slot = plot_w / static_cast<double>(boxes.size());
    const double box_w = std::min(40.0, slot * 0.6);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const Box& b = boxes[i];
        Eigen::VectorXd values(static_cast<Eigen::Index>(b.values.size()));
        for (Eigen::Index k = 0; k < values.size(); ++k) {
            values(k) = b.values[static_cast<std::size_t>(k)];
        }
        const double q25 = csp::interpolated_quantile(values, 0.25);
        const double median = csp::interpolated_quantile(values, 0.5);
        const double q75 = csp::interpolated_quantile(values, 0.75);
        const double iqr = q75 - q25;
        const double fence_lo = q25 - 1.5 * iqr;
        const double fence_hi = q75 + 1.5 * iqr;
        double whisker_lo = q25;
        double whisker_hi = q75;
        std::vector<double> outliers;
        for (double v : b.values) {
            if (v < fence_lo || v > fence_hi) {
                outliers.push_back(v);
            } else {
                whisker_lo = std::min(whisker_lo, v);
                whisker_hi = std::max(whisker_hi, v);
            }
        }

        const double cx = left + slot * (static_cast<double>(i) + 0.5);
        doc.line(cx, map_y(whisker_hi), cx, map_y(q75), "#333333");
        doc.line(cx, map_y(q25), cx, map_y(whisker_lo), "#333333");
        doc.line(cx - box_w / 4.0, map_y(whisker_hi), cx + box_w / 4.0, map_y(whisker_hi),
                 "#333333");
        doc.line(cx - box_w / 4.0, map_y(whisker_lo), cx + box_w / 4.0, map_y(whisker_lo),
                 "#333333");
        doc.rect(cx - box_w / 2.0, map_y(q75), box_w, map_y(q25) - map_y(q75), b.fill,
                 "#333333", "box");
        doc.line(cx - box_w / 2.0, map_y(median), cx + box_w / 2.0, map_y(median), "#333333",
                 1.5);
        for (double v : outliers) {
            doc.circle(cx, map_y(v), 2.5, "#333333");
        }
        doc.text(cx, top + plot_h + 15.0, b.label, 10.0, "middle");
    }
}

} // namespace dbcsp::svg
