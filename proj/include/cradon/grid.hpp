#pragma once

#include <cmath>
#include <cstddef>

namespace cradon {

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

/// Distance from q to the closed segment [a, b].
double segment_distance(Point2 q, Point2 a, Point2 b);

/// Infinite line through `point` with unit `direction`.
struct Line2D
{
    Point2 point;
    Point2 direction{1.0, 0.0};

    Line2D() = default;
    Line2D(Point2 p, Point2 dir);
    static Line2D through(Point2 p, double angle) { return Line2D(p, unit_vector(angle)); }

    Point2 normal() const { return perp(direction); }
    double signed_distance(Point2 q) const { return dot(q - point, normal()); }
    Point2 reflect(Point2 q) const;
};

/// Rotation about the origin by `angle` followed by translation.
struct RigidMotion2D
{
    double angle = 0.0;
    Point2 translation;

    Point2 apply(Point2 p) const;
    Point2 apply_inverse(Point2 p) const;
    RigidMotion2D inverse() const;
    /// (this * other)(p) == this->apply(other.apply(p))
    RigidMotion2D compose(const RigidMotion2D& other) const;
};

/// Uniform axis-aligned node lattice: node (i, j) sits at origin + h*(i, j).
class Grid2D
{
public:
    Grid2D(Point2 origin, double h, int nx, int ny);

    /// Grid with nodes symmetric about `center`, covering at least
    /// [center - half_extent, center + half_extent]^2.
    static Grid2D centered(Point2 center, double half_extent, double h);
    /// Grid of exactly n x n nodes symmetric about `center`.
    static Grid2D centered_nodes(Point2 center, int n, double h);

    Point2 origin() const { return origin_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }

    /// Row-major flattening: j selects the row (y), i the column (x).
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i); }
    Point2 node(int i, int j) const { return {origin_.x + h_ * i, origin_.y + h_ * j}; }
    Point2 node(std::size_t k) const { return node(static_cast<int>(k % nx_), static_cast<int>(k / nx_)); }
    Point2 upper() const { return node(nx_ - 1, ny_ - 1); }

    bool contains(Point2 p, double tol = 0.0) const;
    /// Nearest node indices (clamped to the grid).
    std::size_t nearest_index(Point2 p) const;

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    Point2 origin_;
    double h_;
    int nx_;
    int ny_;
};

/// Bilinear stencil of a point: up to four (index, weight) pairs. `count` is
/// zero when the point is outside the grid rectangle.
struct BilinearStencil
{
    std::size_t index[4]{};
    double weight[4]{};
    int count = 0;
};

BilinearStencil bilinear_stencil(const Grid2D& g, Point2 p);

} // namespace cradon
