#include "cradon/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace cradon {

double segment_distance(Point2 q, Point2 a, Point2 b)
{
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return distance(q, a);
    const double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
    return distance(q, a + t * ab);
}

Line2D::Line2D(Point2 p, Point2 dir) : point(p)
{
    const double n = norm(dir);
    if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("line needs a finite point and a nonzero finite direction");
    direction = (1.0 / n) * dir;
}

Point2 Line2D::reflect(Point2 q) const
{
    const Point2 d = q - point;
    return point + 2.0 * dot(d, direction) * direction - d;
}

Point2 RigidMotion2D::apply(Point2 p) const
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y + translation.x, s * p.x + c * p.y + translation.y};
}

Point2 RigidMotion2D::apply_inverse(Point2 p) const
{
    const double c = std::cos(angle), s = std::sin(angle);
    const Point2 q = p - translation;
    return {c * q.x + s * q.y, -s * q.x + c * q.y};
}

RigidMotion2D RigidMotion2D::inverse() const
{
    RigidMotion2D inv;
    inv.angle = -angle;
    inv.translation = -RigidMotion2D{-angle, {}}.apply(translation);
    return inv;
}

RigidMotion2D RigidMotion2D::compose(const RigidMotion2D& other) const
{
    return RigidMotion2D{angle + other.angle, apply(other.translation)};
}

Grid2D::Grid2D(Point2 origin, double h, int nx, int ny) : origin_(origin), h_(h), nx_(nx), ny_(ny)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("grid spacing must be positive and finite");
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("grid needs at least 2 nodes per axis");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
        throw std::invalid_argument("grid origin must be finite");
}

Grid2D Grid2D::centered(Point2 center, double half_extent, double h)
{
    const int half = static_cast<int>(std::ceil(half_extent / h - 1e-9));
    const int n = 2 * half + 1;
    return centered_nodes(center, n, h);
}

Grid2D Grid2D::centered_nodes(Point2 center, int n, double h)
{
    const double off = 0.5 * (n - 1) * h;
    return Grid2D({center.x - off, center.y - off}, h, n, n);
}

bool Grid2D::contains(Point2 p, double tol) const
{
    const Point2 hi = upper();
    return p.x >= origin_.x - tol && p.x <= hi.x + tol && p.y >= origin_.y - tol && p.y <= hi.y + tol;
}

std::size_t Grid2D::nearest_index(Point2 p) const
{
    const int i = std::clamp(static_cast<int>(std::lround((p.x - origin_.x) / h_)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::lround((p.y - origin_.y) / h_)), 0, ny_ - 1);
    return index(i, j);
}

BilinearStencil bilinear_stencil(const Grid2D& g, Point2 p)
{
    BilinearStencil st;
    // points within rounding distance of the rectangle edge count as inside,
    // so mirror-image points are treated alike
    constexpr double edge_tol = 1e-9;
    const double maxx = g.nx() - 1, maxy = g.ny() - 1;
    double fx = (p.x - g.origin().x) / g.h();
    double fy = (p.y - g.origin().y) / g.h();
    if (!(fx >= -edge_tol && fx <= maxx + edge_tol && fy >= -edge_tol && fy <= maxy + edge_tol))
        return st;
    fx = std::clamp(fx, 0.0, maxx);
    fy = std::clamp(fy, 0.0, maxy);
    int i = static_cast<int>(fx);
    int j = static_cast<int>(fy);
    if (i > g.nx() - 2)
        i = g.nx() - 2;
    if (j > g.ny() - 2)
        j = g.ny() - 2;
    const double ax = fx - i, ay = fy - j;
    st.index[0] = g.index(i, j);
    st.index[1] = g.index(i + 1, j);
    st.index[2] = g.index(i, j + 1);
    st.index[3] = g.index(i + 1, j + 1);
    st.weight[0] = (1.0 - ax) * (1.0 - ay);
    st.weight[1] = ax * (1.0 - ay);
    st.weight[2] = (1.0 - ax) * ay;
    st.weight[3] = ax * ay;
    st.count = 4;
    return st;
}

} // namespace cradon
