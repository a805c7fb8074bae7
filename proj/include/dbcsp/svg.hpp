#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dbcsp::svg {

/// Minimal SVG writer. Data curves are the only <polyline> elements and
/// boxplot bodies the only <rect class="box"> elements, so element counts
/// reflect the plotted content exactly; frames, axes and legend markers
/// use <rect>/<line>.
class Document {
public:
    Document(double width, double height);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& stroke, double stroke_width, bool dashed);
    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke, const std::string& css_class = "");
    void circle(double cx, double cy, double r, const std::string& fill);
    void text(double x, double y, const std::string& content, double size,
              const std::string& anchor = "start");

    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    double width_ = 0.0;
    double height_ = 0.0;
    std::string body_;
};

/// One curve of a line panel, sampled at 0..n-1.
struct Series {
    std::vector<double> values;
    std::string color;
    bool dashed = false;
    std::string label;
};

/// Frame, y-ticks, title and one polyline per series; the y-range is the
/// min/max over all series padded by 5%. With legend=true a marker + label
/// per series is drawn inside the panel.
void line_panel(Document& doc, double x, double y, double w, double h,
                const std::string& title, const std::vector<Series>& series, bool legend);

/// One boxplot from Tukey's five-number summary: box between the
/// quartiles, median line, whiskers to the most extreme values within
/// 1.5 IQR of the box, one circle per point beyond.
struct Box {
    std::vector<double> values;
    std::string fill;
    std::string label;
};

void box_panel(Document& doc, double x, double y, double w, double h,
               const std::string& title, const std::vector<Box>& boxes);

/// &<>" escaping for text nodes and attribute values.
std::string xml_escape(const std::string& raw);

} // namespace dbcsp::svg
