#include "fsteiner/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace fsteiner::io {

using nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

/// JSON has no NaN or infinity; such values become null.
ordered_json real(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

/// Maps plane coordinates into an SVG viewport with the y axis pointing up.
class Viewport {
public:
    explicit Viewport(const std::vector<Point>& pts, double size = 800.0) : size_(size) {
        Point lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
        for (const Point& p : pts) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        span_ = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
        const double pad = 0.05 * span_;
        lo_ = lo - Point{pad, pad};
        extent_ = span_ + 2.0 * pad;
        height_ = (hi.y - lo.y) + 2.0 * pad;
        width_ = (hi.x - lo.x) + 2.0 * pad;
    }
    double scale() const { return size_ / extent_; }
    double width() const { return width_ * scale(); }
    double height() const { return height_ * scale(); }
    Point map(Point p) const { return {(p.x - lo_.x) * scale(), height() - (p.y - lo_.y) * scale()}; }
    double span() const { return span_ * scale(); }

private:
    double size_;
    double span_ = 1.0;
    double extent_ = 1.0;
    double width_ = 1.0;
    double height_ = 1.0;
    Point lo_;
};

std::string svg_open(const Viewport& view, const std::string& title) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<!-- " + title + "; y axis points up, 5% padding around the data -->\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + short_num(view.width()) + "\" height=\"" +
           short_num(view.height()) + "\" viewBox=\"0 0 " + short_num(view.width()) + " " +
           short_num(view.height()) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string svg_line(const Viewport& view, Point a, Point b, double width, const char* color) {
    const Point p = view.map(a);
    const Point q = view.map(b);
    return "<line x1=\"" + short_num(p.x) + "\" y1=\"" + short_num(p.y) + "\" x2=\"" + short_num(q.x) + "\" y2=\"" +
           short_num(q.y) + "\" stroke=\"" + color + "\" stroke-width=\"" + short_num(width) +
           "\" stroke-linecap=\"round\"/>\n";
}

std::string svg_dot(const Viewport& view, Point a, double r, const char* color) {
    const Point p = view.map(a);
    return "<circle cx=\"" + short_num(p.x) + "\" cy=\"" + short_num(p.y) + "\" r=\"" + short_num(r) +
           "\" fill=\"" + color + "\"/>\n";
}

Point parse_point(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument(std::string("terminal spec: ") + what + " must be a [x, y] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string leaves_csv(const LeafSet& leaves) {
    std::string out;
    for (const Point& p : leaves.points) out += num(p.x) + "," + num(p.y) + "\n";
    return out;
}

std::string leaves_json(const LeafSet& leaves, const IfsParams& params) {
    ordered_json j;
    j["lambda"] = params.lambda();
    j["depth"] = leaves.level;
    j["count"] = leaves.points.size();
    ordered_json pts = ordered_json::array();
    for (const Point& p : leaves.points) pts.push_back(point_json(p));
    j["points"] = std::move(pts);
    return j.dump(2) + "\n";
}

std::string tree_json(const TruncatedTree& tree) {
    ordered_json j;
    j["lambda"] = tree.params().lambda();
    j["depth"] = tree.depth();
    j["length"] = tree.total_length();
    ordered_json edges = ordered_json::array();
    for (const TreeEdge& e : tree.edges()) {
        edges.push_back({{"word", e.word.str()},
                         {"level", e.level},
                         {"from", point_json(e.segment.a)},
                         {"to", point_json(e.segment.b)}});
    }
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

std::string tree_svg(const TruncatedTree& tree) {
    std::vector<Point> pts;
    for (const TreeEdge& e : tree.edges()) {
        pts.push_back(e.segment.a);
        pts.push_back(e.segment.b);
    }
    const Viewport view(pts);
    std::string out = svg_open(view, "self-similar tree, lambda = " + num(tree.params().lambda()) +
                                         ", depth = " + std::to_string(tree.depth()) + ", " +
                                         std::to_string(tree.edges().size()) + " edges");
    const double base = 0.006 * view.span();
    for (const TreeEdge& e : tree.edges()) {
        const double width = std::max(base * std::pow(0.6, e.level), 0.05);
        out += svg_line(view, e.segment.a, e.segment.b, width, "black");
    }
    out += "</svg>\n";
    return out;
}

TerminalSpec parse_terminal_spec(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text.begin(), text.end());
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("terminal spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
        throw std::invalid_argument("terminal spec: expected an object with a \"points\" array");
    }
    TerminalSpec spec;
    for (const auto& p : j["points"]) spec.points.push_back(parse_point(p, "each point"));
    if (j.contains("line") && !j["line"].is_null()) {
        const auto& l = j["line"];
        if (!l.is_object() || !l.contains("normal") || !l.contains("offset") || !l["offset"].is_number()) {
            throw std::invalid_argument("terminal spec: \"line\" needs \"normal\" and numeric \"offset\"");
        }
        const Point n = parse_point(l["normal"], "line.normal");
        const double len = norm(n);
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw std::invalid_argument("terminal spec: line.normal must be a nonzero vector");
        }
        // offsets are given for the normal as written; rescale with it
        spec.line = OrientedLine(n / len, l["offset"].get<double>() / len);
    }
    spec.validate();
    return spec;
}

std::string terminal_spec_json(const TerminalSpec& spec) {
    ordered_json j;
    ordered_json pts = ordered_json::array();
    for (const Point& p : spec.points) pts.push_back(point_json(p));
    j["points"] = std::move(pts);
    if (spec.line) {
        j["line"] = {{"normal", point_json(spec.line->normal())}, {"offset", spec.line->offset()}};
    }
    return j.dump(2) + "\n";
}

std::string steiner_json(const SteinerTree& tree, const MinimizerReport& report) {
    ordered_json j;
    j["length"] = tree.length;
    j["terminals"] = tree.topology.terminals;
    j["steiner_count"] = tree.topology.steiner;
    ordered_json terms = ordered_json::array();
    for (const Point& p : tree.terminals) terms.push_back(point_json(p));
    j["terminal_coords"] = std::move(terms);
    ordered_json st = ordered_json::array();
    for (const Point& p : tree.steiner_coords) st.push_back(point_json(p));
    j["steiner_coords"] = std::move(st);
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : tree.topology.edges) edges.push_back(ordered_json::array({a, b}));
    j["edges"] = std::move(edges);
    j["collapsed_edges"] = tree.collapsed_edges;
    j["foot"] = tree.foot ? point_json(*tree.foot) : ordered_json(nullptr);
    j["multiplicity"] = tree.multiplicity;
    j["exact_construction"] = tree.exact_construction;
    ordered_json rep;
    rep["ok"] = report.ok;
    rep["worst_angle_deficit"] = real(report.worst_angle_deficit);
    rep["trunk_tilt"] = report.trunk_tilt;
    ordered_json failures = ordered_json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"check", f.check}, {"node", f.node}, {"value", real(f.value)}});
    }
    rep["failures"] = std::move(failures);
    j["validation"] = std::move(rep);
    return j.dump(2) + "\n";
}

std::string steiner_svg(const SteinerTree& tree, const TerminalSpec& spec) {
    std::vector<Point> pts = tree.terminals;
    pts.insert(pts.end(), tree.steiner_coords.begin(), tree.steiner_coords.end());
    const Viewport view(pts);
    std::string out = svg_open(view, "Steiner tree, length = " + num(tree.length) + ", " +
                                         std::to_string(tree.topology.terminals) + " terminals, " +
                                         std::to_string(tree.topology.steiner) + " Steiner points");
    const double w = 0.004 * view.span();
    if (spec.line) {
        // clip the line to the padded data box
        const Point d = spec.line->direction();
        const Point c = perpendicular_foot(*tree.foot, *spec.line);
        double reach = 0.0;
        for (const Point& p : pts) reach = std::max(reach, distance(p, c));
        out += svg_line(view, c - reach * d, c + reach * d, w, "#888888");
    }
    for (const auto& [a, b] : tree.topology.edges) out += svg_line(view, tree.node(a), tree.node(b), w, "black");
    for (const Point& p : tree.terminals) out += svg_dot(view, p, 2.5 * w, "#c0392b");
    for (const Point& p : tree.steiner_coords) out += svg_dot(view, p, 1.8 * w, "#2471a3");
    out += "</svg>\n";
    return out;
}

std::string reports_json(const std::vector<LemmaReport>& reports, const IfsParams& params) {
    ordered_json j;
    j["lambda"] = params.lambda();
    ordered_json arr = ordered_json::array();
    bool ok = true;
    for (const LemmaReport& r : reports) {
        arr.push_back({{"name", r.name},
                       {"formula_value", real(r.formula_value)},
                       {"empirical_value", r.empirical_value ? real(*r.empirical_value) : ordered_json(nullptr)},
                       {"margin", real(r.margin)},
                       {"passed", r.passed},
                       {"asserted", r.asserted},
                       {"detail", r.detail}});
        ok = ok && (r.passed || !r.asserted);
    }
    j["reports"] = std::move(arr);
    j["all_asserted_passed"] = ok;
    return j.dump(2) + "\n";
}

std::string reports_table(const std::vector<LemmaReport>& reports) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "%-24s %-8s %-10s %18s %18s %12s\n", "check", "status", "mode", "formula",
                  "empirical", "margin");
    out += line;
    for (const LemmaReport& r : reports) {
        char emp[40] = "-";
        if (r.empirical_value) std::snprintf(emp, sizeof emp, "%.12g", *r.empirical_value);
        std::snprintf(line, sizeof line, "%-24s %-8s %-10s %18.12g %18s %12.4g\n", r.name.c_str(),
                      r.passed ? "PASS" : "FAIL", r.asserted ? "asserted" : "explore", r.formula_value, emp,
                      r.margin);
        out += line;
        out += "    " + r.detail + "\n";
    }
    return out;
}

std::string gap_csv(double lo, double hi, int steps) {
    if (steps < 2 || !(lo > 0.0) || !(hi < 0.5) || !(lo < hi)) {
        throw std::invalid_argument("gap_csv: need 0 < lo < hi < 0.5 and at least 2 steps");
    }
    std::string out = "lambda,gap\n";
    for (int i = 0; i < steps; ++i) {
        const double l = lo + (hi - lo) * i / (steps - 1);
        out += num(l) + "," + num(branching_gap(IfsParams(l), 0.0)) + "\n";
    }
    return out;
}

}  // namespace fsteiner::io
