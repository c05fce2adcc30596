#include "cradon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cradon {

namespace {

int line_sample_count(double half_window, double ds)
{
    return static_cast<int>(std::ceil(2.0 * half_window / ds - 1e-9)) + 1;
}

// t_k on [-T, T] with t exactly 0 at the middle sample of an odd count.
double line_param(int k, int count, double half_window)
{
    return static_cast<double>(2 * k - (count - 1)) / (count - 1) * half_window;
}

void check_window(double half_window, double ds)
{
    if (!(ds > 0.0) || !std::isfinite(ds))
        throw std::invalid_argument("sample spacing ds must be positive");
    if (!(half_window > 0.0) || !std::isfinite(half_window))
        throw std::invalid_argument("parameter window is empty");
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

} // namespace

CenterSet CenterSet::line(Point2 point, Point2 direction, double half_window, double ds)
{
    check_window(half_window, ds);
    const Line2D l(point, direction);
    CenterSet S;
    S.kind_ = CenterKind::Line;
    S.ds_ = ds;
    S.half_window_ = half_window;
    S.vertices_ = {point};
    S.motion_ = RigidMotion2D{std::atan2(l.direction.y, l.direction.x), point};
    const int count = line_sample_count(half_window, ds);
    const double phase = std::atan2(l.direction.y, l.direction.x);
    for (int k = 0; k < count; ++k) {
        const double t = line_param(k, count, half_window);
        S.samples_.push_back({t + half_window, point + t * l.direction, phase});
    }
    S.segments_.push_back({point - half_window * l.direction, point + half_window * l.direction});
    S.total_length_ = 2.0 * half_window;
    return S;
}

CenterSet CenterSet::circle(Point2 center, double radius, int samples)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("circle radius must be positive");
    if (samples < 3)
        throw std::invalid_argument("circle needs at least 3 samples");
    CenterSet S;
    S.kind_ = CenterKind::Circle;
    S.center_ = center;
    S.radius_ = radius;
    S.ds_ = 2.0 * std::numbers::pi * radius / samples;
    S.total_length_ = 2.0 * std::numbers::pi * radius;
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / samples;
        S.samples_.push_back({radius * theta, center + radius * unit_vector(theta), theta + 0.5 * std::numbers::pi});
    }
    return S;
}

CenterSet CenterSet::coxeter_cross(int lines, const RigidMotion2D& motion, double half_window, double ds)
{
    if (lines < 1)
        throw std::invalid_argument("Coxeter cross needs N >= 1 lines");
    check_window(half_window, ds);
    CenterSet S;
    S.kind_ = CenterKind::CoxeterCross;
    S.lines_ = lines;
    S.motion_ = motion;
    S.ds_ = ds;
    S.half_window_ = half_window;
    S.total_length_ = 2.0 * half_window * lines;
    const Point2 o = motion.translation;
    const int count = line_sample_count(half_window, ds);
    for (int k = 0; k < lines; ++k) {
        const double angle = motion.angle + std::numbers::pi * k / lines;
        const Point2 d = unit_vector(angle);
        for (int m = 0; m < count; ++m) {
            const double t = line_param(m, count, half_window);
            if (k > 0 && t == 0.0)
                continue; // origin already sampled on line 0
            S.samples_.push_back({2.0 * half_window * k + t + half_window, o + t * d, angle});
        }
        S.segments_.push_back({o - half_window * d, o + half_window * d});
    }
    return S;
}

CenterSet CenterSet::polyline(std::vector<Point2> vertices, double ds)
{
    if (vertices.size() < 2)
        throw std::invalid_argument("polyline needs at least 2 vertices");
    if (!(ds > 0.0) || !std::isfinite(ds))
        throw std::invalid_argument("sample spacing ds must be positive");
    CenterSet S;
    S.kind_ = CenterKind::Polyline;
    S.ds_ = ds;
    double s0 = 0.0;
    for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
        const Point2 a = vertices[v], b = vertices[v + 1];
        const double len = distance(a, b);
        if (!(len > 0.0))
            throw std::invalid_argument("polyline has repeated consecutive vertices");
        const double phase = std::atan2(b.y - a.y, b.x - a.x);
        const int pieces = static_cast<int>(std::ceil(len / ds - 1e-9));
        for (int m = (v == 0 ? 0 : 1); m <= pieces; ++m) {
            const double u = static_cast<double>(m) / pieces;
            S.samples_.push_back({s0 + u * len, a + u * (b - a), phase});
        }
        S.segments_.push_back({a, b});
        s0 += len;
    }
    S.total_length_ = s0;
    S.vertices_ = std::move(vertices);
    return S;
}

CenterSet CenterSet::points(std::vector<Point2> pts)
{
    if (pts.empty())
        throw std::invalid_argument("finite center set is empty");
    CenterSet S;
    S.kind_ = CenterKind::Points;
    for (std::size_t k = 0; k < pts.size(); ++k)
        S.samples_.push_back({static_cast<double>(k), pts[k], 0.0});
    S.vertices_ = std::move(pts);
    return S;
}

double CenterSet::distance_to(Point2 q) const
{
    switch (kind_) {
    case CenterKind::Circle:
        return std::abs(distance(q, center_) - radius_);
    case CenterKind::Points: {
        double d = std::numeric_limits<double>::infinity();
        for (Point2 p : vertices_)
            d = std::min(d, distance(q, p));
        return d;
    }
    default: {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : segments_)
            d = std::min(d, segment_distance(q, a, b));
        return d;
    }
    }
}

std::string CenterSet::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case CenterKind::Line: {
        const Point2 d = unit_vector(motion_.angle);
        os << "line point=" << fmt(vertices_[0].x) << "," << fmt(vertices_[0].y) << " direction=" << fmt(d.x) << ","
           << fmt(d.y) << " half_window=" << fmt(half_window_) << " ds=" << fmt(ds_);
        break;
    }
    case CenterKind::Circle:
        os << "circle center=" << fmt(center_.x) << "," << fmt(center_.y) << " radius=" << fmt(radius_)
           << " samples=" << samples_.size();
        break;
    case CenterKind::CoxeterCross:
        os << "coxeter-cross N=" << lines_ << " rotation=" << fmt(motion_.angle) << " translation="
           << fmt(motion_.translation.x) << "," << fmt(motion_.translation.y) << " half_window=" << fmt(half_window_)
           << " ds=" << fmt(ds_);
        break;
    case CenterKind::Polyline:
        os << "polyline ds=" << fmt(ds_) << " vertices=";
        for (std::size_t k = 0; k < vertices_.size(); ++k)
            os << (k ? ";" : "") << fmt(vertices_[k].x) << "," << fmt(vertices_[k].y);
        break;
    case CenterKind::Points:
        os << "points ";
        for (std::size_t k = 0; k < vertices_.size(); ++k)
            os << (k ? ";" : "") << fmt(vertices_[k].x) << "," << fmt(vertices_[k].y);
        break;
    }
    os << " n=" << samples_.size();
    return os.str();
}

Point2 CenterSet::point_at(double s) const
{
    switch (kind_) {
    case CenterKind::Circle:
        return center_ + radius_ * unit_vector(s / radius_);
    case CenterKind::Line:
        return vertices_[0] + (s - half_window_) * unit_vector(motion_.angle);
    case CenterKind::CoxeterCross: {
        const int k = std::clamp(static_cast<int>(std::floor(s / (2.0 * half_window_))), 0, lines_ - 1);
        const double t = s - 2.0 * half_window_ * k - half_window_;
        return motion_.translation + t * unit_vector(motion_.angle + std::numbers::pi * k / lines_);
    }
    case CenterKind::Polyline: {
        double s0 = 0.0;
        for (const auto& [a, b] : segments_) {
            const double len = distance(a, b);
            if (s <= s0 + len)
                return a + (std::max(0.0, s - s0) / len) * (b - a);
            s0 += len;
        }
        return segments_.back().second;
    }
    case CenterKind::Points: {
        const auto k = static_cast<std::size_t>(std::clamp(std::lround(s), 0L, static_cast<long>(vertices_.size()) - 1));
        return vertices_[k];
    }
    }
    return {};
}

double truncation_half_window(Point2 point, Point2 direction, Point2 support_center, double support_radius, double r_max)
{
    const Line2D l(point, direction);
    const double t0 = dot(support_center - point, l.direction);
    const double perp_d = std::abs(l.signed_distance(support_center));
    const double reach = r_max + support_radius;
    return std::abs(t0) + std::sqrt(std::max(0.0, reach * reach - perp_d * perp_d));
}

TangentLine tangent_at(const CenterSet& S, double s)
{
    switch (S.kind()) {
    case CenterKind::Circle: {
        const double theta = s / S.circle_radius();
        return {S.circle_center() + S.circle_radius() * unit_vector(theta), {-std::sin(theta), std::cos(theta)}};
    }
    case CenterKind::Line: {
        const double T = S.half_window();
        if (s < -1e-12 * T || s > 2.0 * T * (1.0 + 1e-12))
            throw std::out_of_range("arc-length parameter outside the line window");
        return {S.point_at(s), unit_vector(S.motion().angle)};
    }
    case CenterKind::CoxeterCross: {
        const double T = S.half_window();
        if (s < -1e-12 * T || s > 2.0 * T * S.lines() * (1.0 + 1e-12))
            throw std::out_of_range("arc-length parameter outside the cross window");
        const int k = std::clamp(static_cast<int>(std::floor(s / (2.0 * T))), 0, S.lines() - 1);
        const double t = s - 2.0 * T * k - T;
        if (std::abs(t) <= 1e-9 * T)
            throw std::domain_error("tangent undefined at the crossing point of the Coxeter system");
        return {S.point_at(s), unit_vector(S.motion().angle + std::numbers::pi * k / S.lines())};
    }
    case CenterKind::Polyline: {
        const double tol = 1e-9 * S.total_length();
        if (s < -tol || s > S.total_length() + tol)
            throw std::out_of_range("arc-length parameter outside the polyline");
        double s0 = 0.0;
        const auto& segs = S.segments();
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const auto& [a, b] = segs[k];
            const double len = distance(a, b);
            if (k + 1 < segs.size() && std::abs(s - (s0 + len)) <= tol)
                throw std::domain_error("tangent undefined at a polyline vertex");
            if (s <= s0 + len || k + 1 == segs.size())
                return {S.point_at(s), (1.0 / len) * (b - a)};
            s0 += len;
        }
        break;
    }
    case CenterKind::Points:
        break;
    }
    throw std::domain_error("tangent undefined for a finite point set");
}

bool ConvexHull2D::contains(Point2 p, double tol) const
{
    if (vertices.empty())
        return false;
    if (vertices.size() == 1)
        return distance(p, vertices[0]) <= tol;
    if (vertices.size() == 2)
        return segment_distance(p, vertices[0], vertices[1]) <= tol;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        const Point2 a = vertices[k], b = vertices[(k + 1) % vertices.size()];
        const Point2 e = b - a;
        if (cross(e, p - a) / norm(e) < -tol)
            return false;
    }
    return true;
}

ConvexHull2D convex_hull(std::vector<Point2> pts)
{
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3)
        return {pts};
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0)
            --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0)
            --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return {h};
}

ConvexHull2D hull_of_support(const ScalarField2D& f, double tau)
{
    const double m = f.max_abs();
    if (!(m > 0.0))
        throw std::domain_error("empty support: field is identically zero");
    std::vector<Point2> pts;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (std::abs(f[k]) >= tau * m)
            pts.push_back(f.grid().node(k));
    return convex_hull(std::move(pts));
}

HullIntersection line_intersects_hull(const TangentLine& L, const ConvexHull2D& H)
{
    if (H.vertices.empty())
        throw std::invalid_argument("empty hull");
    const Point2 n = perp((1.0 / norm(L.direction)) * L.direction);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, scale = norm(L.base);
    for (Point2 v : H.vertices) {
        const double s = dot(v - L.base, n);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        scale = std::max(scale, norm(v));
    }
    double clearance;
    if (lo <= 0.0 && hi >= 0.0)
        clearance = -std::min(-lo, hi);
    else
        clearance = lo > 0.0 ? lo : -hi;
    const double tol = 1e-12 * (1.0 + scale);
    if (std::abs(clearance) <= tol)
        clearance = 0.0;
    return {clearance <= 0.0, clearance};
}

void write_center_samples(std::ostream& os, const CenterSet& S)
{
    os << std::setprecision(17) << "s,x,y\n";
    for (const auto& c : S.samples())
        os << c.s << "," << c.pos.x << "," << c.pos.y << "\n";
}

} // namespace cradon
