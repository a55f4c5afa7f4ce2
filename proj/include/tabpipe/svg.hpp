#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace tabpipe::svg {

inline std::string escapeXml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Fixed two-decimal formatting keeps emitted geometry byte-stable.
inline std::string px(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Deterministic SVG builder: no timestamps, attribute order is insertion
/// order, geometry formatted to two decimals.
class Document {
public:
    Document(double width, double height) : width_(width), height_(height) {}

    class Element {
    public:
        Element(Document& doc, std::string tag) : doc_(doc), tag_(std::move(tag)) {}

        Element& attr(const std::string& k, const std::string& v) {
            attrs_.emplace_back(k, escapeXml(v));
            return *this;
        }
        Element& attr(const std::string& k, double v) { return attr(k, px(v)); }
        Element& text(const std::string& t) {
            content_ = escapeXml(t);
            return *this;
        }

        ~Element() {
            std::ostringstream os;
            os << "  <" << tag_;
            for (const auto& [k, v] : attrs_) os << " " << k << "=\"" << v << "\"";
            if (content_.empty())
                os << "/>\n";
            else
                os << ">" << content_ << "</" << tag_ << ">\n";
            doc_.body_ += os.str();
        }

    private:
        Document& doc_;
        std::string tag_;
        std::vector<std::pair<std::string, std::string>> attrs_;
        std::string content_;
    };

    Element element(const std::string& tag) { return Element(*this, tag); }

    Element line(double x1, double y1, double x2, double y2) {
        Element e(*this, "line");
        e.attr("x1", x1).attr("y1", y1).attr("x2", x2).attr("y2", y2);
        return e;
    }
    Element rect(double x, double y, double w, double h) {
        Element e(*this, "rect");
        e.attr("x", x).attr("y", y).attr("width", w).attr("height", h);
        return e;
    }
    Element circle(double cx, double cy, double r) {
        Element e(*this, "circle");
        e.attr("cx", cx).attr("cy", cy).attr("r", r);
        return e;
    }
    Element label(double x, double y, const std::string& t, double size = 12.0,
                  const std::string& anchor = "start") {
        Element e(*this, "text");
        e.attr("x", x).attr("y", y).attr("font-size", px(size)).attr("font-family", "sans-serif");
        e.attr("text-anchor", anchor);
        e.text(t);
        return e;
    }

    std::string str() const {
        std::ostringstream os;
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width_) << "\" height=\""
           << px(height_) << "\" viewBox=\"0 0 " << px(width_) << " " << px(height_) << "\">\n";
        os << body_;
        os << "</svg>\n";
        return os.str();
    }

    double width() const { return width_; }
    double height() const { return height_; }

private:
    friend class Element;
    double width_;
    double height_;
    std::string body_;
};

/// Fixed 10-color categorical palette; series beyond 10 cycle colors and pick
/// up distinct dash patterns.
inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

inline std::string paletteColor(size_t i) { return palette()[i % palette().size()]; }

inline std::string paletteDash(size_t i) {
    const size_t cycle = i / palette().size();
    if (cycle == 0) return "";
    return std::to_string(cycle * 2) + " " + std::to_string(cycle);
}

} // namespace tabpipe::svg
