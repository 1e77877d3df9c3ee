#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace fsteiner {

/// Tolerance for geometric predicates (incidence, containment, angles).
inline constexpr double kEpsGeom = 1e-9;
/// Tolerance for algebraic identities.
inline constexpr double kEpsAlgebraic = 1e-12;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt3 = 1.73205080756887729353;
inline constexpr double kTwoThirdsPi = 2.0 * kPi / 3.0;

/// A point (or vector) of the plane, identified with the complex plane.
struct Point {
    double x = 0.0;
    double y = 0.0;

    Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
    Point& operator*=(double s) { x *= s; y *= s; return *this; }

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator-(Point a) { return {-a.x, -a.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Complex product a·b.
inline Point complex_mul(Point a, Point b) { return {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x}; }
inline Point unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Point rotate(Point p, double angle) { return complex_mul(p, unit_vector(angle)); }
/// Counterclockwise perpendicular.
inline Point perp(Point a) { return {-a.y, a.x}; }

/// Throws std::invalid_argument if p has a NaN or infinite coordinate.
void require_finite(Point p, const char* what);

/// The line {p : p·normal = offset}; the normal fixes the positive side.
class OrientedLine {
public:
    /// Throws std::invalid_argument unless ‖normal‖ = 1 within 1e-12.
    OrientedLine(Point normal, double offset);

    /// Line through `point` with the given (not necessarily unit) normal direction.
    static OrientedLine through(Point point, Point normal_direction);

    Point normal() const { return normal_; }
    double offset() const { return offset_; }
    /// A unit vector along the line (normal rotated by -90 degrees).
    Point direction() const { return {normal_.y, -normal_.x}; }

private:
    Point normal_;
    double offset_;
};

struct Segment {
    Point a;
    Point b;
    double length() const { return distance(a, b); }
};

enum class Side { left, right };

double signed_distance(Point p, const OrientedLine& line);
Point perpendicular_foot(Point p, const OrientedLine& line);

/// Point minimizing the summed distance to a, b, c.
///
/// Interior 120-degree point when every angle of the triangle is below
/// 120 degrees, otherwise the obtuse vertex. Collinear inputs return the
/// middle point. Throws std::invalid_argument if two inputs coincide.
Point torricelli_point(Point a, Point b, Point c);

/// Third vertex of the equilateral triangle on [a,b], on the given side of a->b.
Point equilateral_third(Point a, Point b, Side side);

/// Counterclockwise hull without collinear vertices. Duplicates collapse,
/// so identical inputs give a single point and collinear ones two.
std::vector<Point> convex_hull(std::span<const Point> pts);

/// Whether p lies in the hull polygon (as returned by convex_hull) up to tol.
bool hull_contains(std::span<const Point> hull, Point p, double tol = kEpsGeom);

/// Unsigned angle at v between the rays v->p and v->q, in [0, pi].
double angle_between(Point v, Point p, Point q);

}  // namespace fsteiner
