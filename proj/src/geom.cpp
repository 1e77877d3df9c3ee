#include "fsteiner/geom.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace fsteiner {

void require_finite(Point p, const char* what) {
    if (!is_finite(p)) {
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

OrientedLine::OrientedLine(Point normal, double offset) : normal_(normal), offset_(offset) {
    require_finite(normal, "OrientedLine");
    if (!std::isfinite(offset)) {
        throw std::invalid_argument("OrientedLine: non-finite offset");
    }
    if (std::abs(norm(normal) - 1.0) > kEpsAlgebraic) {
        throw std::invalid_argument("OrientedLine: normal must have unit length");
    }
}

OrientedLine OrientedLine::through(Point point, Point normal_direction) {
    require_finite(point, "OrientedLine::through");
    const double len = norm(normal_direction);
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw std::invalid_argument("OrientedLine::through: degenerate normal");
    }
    const Point n = normal_direction / len;
    return OrientedLine(n, dot(point, n));
}

double signed_distance(Point p, const OrientedLine& line) {
    require_finite(p, "signed_distance");
    return dot(p, line.normal()) - line.offset();
}

Point perpendicular_foot(Point p, const OrientedLine& line) {
    return p - signed_distance(p, line) * line.normal();
}

namespace {

Point line_intersection(Point p1, Point d1, Point p2, Point d2) {
    const double denom = cross(d1, d2);
    const double t = cross(p2 - p1, d2) / denom;
    return p1 + t * d1;
}

}  // namespace

Point torricelli_point(Point a, Point b, Point c) {
    require_finite(a, "torricelli_point");
    require_finite(b, "torricelli_point");
    require_finite(c, "torricelli_point");
    if (a == b || b == c || a == c) {
        throw std::invalid_argument("torricelli_point: coincident vertices");
    }

    const double scale = std::max({distance(a, b), distance(b, c), distance(a, c)});
    if (std::abs(cross(b - a, c - a)) <= kEpsAlgebraic * scale * scale) {
        // collinear: the median point along the common line
        const Point dir = (distance(a, b) >= distance(a, c) ? b - a : c - a);
        std::array<std::pair<double, Point>, 3> proj{{{0.0, a}, {dot(b - a, dir), b}, {dot(c - a, dir), c}}};
        std::sort(proj.begin(), proj.end(), [](auto& l, auto& r) { return l.first < r.first; });
        return proj[1].second;
    }

    const Point verts[3] = {a, b, c};
    for (int i = 0; i < 3; ++i) {
        const Point v = verts[i];
        if (angle_between(v, verts[(i + 1) % 3], verts[(i + 2) % 3]) >= kTwoThirdsPi) {
            return v;
        }
    }

    // Simpson lines: each vertex joined to the apex of the outward equilateral
    // triangle on the opposite side.
    const Side outward_bc = cross(c - b, a - b) > 0.0 ? Side::right : Side::left;
    const Side outward_ca = cross(a - c, b - c) > 0.0 ? Side::right : Side::left;
    const Point apex_a = equilateral_third(b, c, outward_bc);
    const Point apex_b = equilateral_third(c, a, outward_ca);
    return line_intersection(a, apex_a - a, b, apex_b - b);
}

Point equilateral_third(Point a, Point b, Side side) {
    require_finite(a, "equilateral_third");
    require_finite(b, "equilateral_third");
    if (a == b) {
        throw std::invalid_argument("equilateral_third: degenerate segment");
    }
    const double angle = side == Side::left ? kPi / 3.0 : -kPi / 3.0;
    return a + rotate(b - a, angle);
}

std::vector<Point> convex_hull(std::span<const Point> pts) {
    std::vector<Point> p(pts.begin(), pts.end());
    for (const Point& q : p) {
        require_finite(q, "convex_hull");
    }
    std::sort(p.begin(), p.end(), [](Point l, Point r) { return l.x < r.x || (l.x == r.x && l.y < r.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() <= 2) {
        return p;
    }

    // Andrew's monotone chain; cross <= 0 drops collinear vertices
    std::vector<Point> hull(2 * p.size());
    std::size_t k = 0;
    for (const Point& q : p) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0.0) --k;
        hull[k++] = q;
    }
    for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
        const Point q = p[i];
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], q - hull[k - 2]) <= 0.0) --k;
        hull[k++] = q;
    }
    hull.resize(k - 1);
    return hull;
}

bool hull_contains(std::span<const Point> hull, Point p, double tol) {
    if (hull.empty()) {
        return false;
    }
    if (hull.size() == 1) {
        return distance(hull[0], p) <= tol;
    }
    if (hull.size() == 2) {
        const Point d = hull[1] - hull[0];
        const double t = std::clamp(dot(p - hull[0], d) / dot(d, d), 0.0, 1.0);
        return distance(hull[0] + t * d, p) <= tol;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point a = hull[i];
        const Point b = hull[(i + 1) % hull.size()];
        if (cross(b - a, p - a) < -tol * norm(b - a)) {
            return false;
        }
    }
    return true;
}

double angle_between(Point v, Point p, Point q) {
    require_finite(v, "angle_between");
    require_finite(p, "angle_between");
    require_finite(q, "angle_between");
    if (p == v || q == v) {
        throw std::invalid_argument("angle_between: ray endpoint coincides with vertex");
    }
    const Point u = p - v;
    const Point w = q - v;
    return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

}  // namespace fsteiner
