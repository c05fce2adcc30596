#pragma once

#include "cradon/field.hpp"
#include "cradon/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cradon {

enum class CenterKind { Line, Circle, CoxeterCross, Polyline, Points };

/// One sampled center. `phase` is the angle of the local line direction at
/// the sample (used to align quadrature nodes with the reflection symmetry of
/// straight pieces); zero for isolated points.
struct CenterSample
{
    double s;
    Point2 pos;
    double phase;
};

/// Center set S with its geometric description and a discrete sampling.
/// Unbounded variants are truncated to |t| <= half_window along each line.
class CenterSet
{
public:
    static CenterSet line(Point2 point, Point2 direction, double half_window, double ds);
    static CenterSet circle(Point2 center, double radius, int samples);
    static CenterSet coxeter_cross(int lines, const RigidMotion2D& motion, double half_window, double ds);
    static CenterSet polyline(std::vector<Point2> vertices, double ds);
    static CenterSet points(std::vector<Point2> pts);

    CenterKind kind() const { return kind_; }
    const std::vector<CenterSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double ds() const { return ds_; }
    double total_length() const { return total_length_; }

    /// Distance from q to the analytic geometry (truncated for unbounded kinds).
    double distance_to(Point2 q) const;
    /// Straight pieces of the geometry (empty for circles and point sets).
    const std::vector<std::pair<Point2, Point2>>& segments() const { return segments_; }

    /// Circle parameters (valid for kind() == Circle).
    Point2 circle_center() const { return center_; }
    double circle_radius() const { return radius_; }
    int lines() const { return lines_; }
    double half_window() const { return half_window_; }
    const std::vector<Point2>& vertices() const { return vertices_; }
    const RigidMotion2D& motion() const { return motion_; }

    /// One-line description, also used in file headers.
    std::string describe() const;

    /// Position at arc-length parameter s.
    Point2 point_at(double s) const;

private:
    CenterSet() = default;

    CenterKind kind_ = CenterKind::Points;
    std::vector<CenterSample> samples_;
    std::vector<std::pair<Point2, Point2>> segments_;
    std::vector<Point2> vertices_;
    double ds_ = 0.0;
    double total_length_ = 0.0;
    double half_window_ = 0.0;
    Point2 center_;
    double radius_ = 0.0;
    int lines_ = 0;
    RigidMotion2D motion_;
};

/// Half window a line through `point` must cover so every circle of radius
/// <= r_max that meets the support disk has its center inside the window.
double truncation_half_window(Point2 point, Point2 direction, Point2 support_center, double support_radius, double r_max);

struct TangentLine
{
    Point2 base;
    Point2 direction;

    Line2D line() const { return Line2D(base, direction); }
};

/// Tangent line at arc-length parameter s. Throws std::domain_error at
/// singular points (cross origin, interior polyline vertices, point sets).
TangentLine tangent_at(const CenterSet& S, double s);

/// Counterclockwise strictly convex vertex list.
struct ConvexHull2D
{
    std::vector<Point2> vertices;

    bool contains(Point2 p, double tol = 1e-12) const;
};

/// Monotone-chain convex hull of a point cloud (collinear points dropped).
ConvexHull2D convex_hull(std::vector<Point2> pts);

/// Hull of grid nodes with |f| >= tau * max|f|. Throws on a zero field.
ConvexHull2D hull_of_support(const ScalarField2D& f, double tau = 1e-8);

struct HullIntersection
{
    bool intersects;
    /// Signed distance from the line to the hull; <= 0 when they meet.
    double clearance;
};

HullIntersection line_intersects_hull(const TangentLine& L, const ConvexHull2D& H);

/// CSV (s, x, y) of the sample points.
void write_center_samples(std::ostream& os, const CenterSet& S);

} // namespace cradon
