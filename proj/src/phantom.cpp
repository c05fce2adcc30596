#include "cradon/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cradon {

namespace {

// e^{-1/t} for t > 0
double smooth_ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity transition: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t)
{
    const double a = smooth_ramp(t), b = smooth_ramp(1.0 - t);
    return a / (a + b);
}

} // namespace

double GaussianBump::operator()(Point2 p) const
{
    const Point2 d = p - center;
    const double r2 = dot(d, d);
    const double w2 = width * width;
    if (r2 > 36.0 * w2)
        return 0.0;
    return amplitude * std::exp(-r2 / w2);
}

double SmoothDisk::operator()(Point2 p) const
{
    const double r = distance(p, center);
    if (r <= radius)
        return amplitude;
    if (r >= radius + edge)
        return 0.0;
    return amplitude * (1.0 - smooth_step((r - radius) / edge));
}

double PolyBump::operator()(Point2 p) const
{
    const Point2 d = p - center;
    const double s = 1.0 - dot(d, d) / (radius * radius);
    if (s <= 0.0)
        return 0.0;
    const double s2 = s * s;
    return amplitude * s2 * s2;
}

double BumpSum::operator()(Point2 p) const
{
    double v = 0.0;
    for (const auto& b : bumps)
        v += b(p);
    return v;
}

CoxeterOdd::CoxeterOdd(const GaussianBump& base, int lines, const RigidMotion2D& motion)
    : base_(base), lines_(lines), motion_(motion)
{
    if (lines < 1)
        throw std::invalid_argument("Coxeter system needs N >= 1 lines");
    if (!(base.width > 0.0))
        throw std::invalid_argument("base bump width must be positive");
    const double reach = base.support_radius();
    for (int k = 0; k < lines; ++k) {
        const Line2D lk = Line2D::through({}, std::numbers::pi * k / lines);
        if (std::abs(lk.signed_distance(base.center)) <= reach)
            throw std::invalid_argument("base bump overlaps line " + std::to_string(k) + " of the Coxeter system");
    }
    const Point2 c = base.center;
    for (int k = 0; k < lines; ++k) {
        // rotation by 2 pi k / N (det +1)
        const double a = 2.0 * std::numbers::pi * k / lines;
        const Point2 rot{std::cos(a) * c.x - std::sin(a) * c.y, std::sin(a) * c.x + std::cos(a) * c.y};
        // reflection across L_k (det -1)
        const double b = 2.0 * std::numbers::pi * k / lines;
        const Point2 ref{std::cos(b) * c.x + std::sin(b) * c.y, std::sin(b) * c.x - std::cos(b) * c.y};
        orbit_.push_back({motion.apply(rot), 1.0});
        orbit_.push_back({motion.apply(ref), -1.0});
    }
}

double CoxeterOdd::operator()(Point2 p) const
{
    double v = 0.0;
    for (const auto& t : orbit_) {
        GaussianBump g = base_;
        g.center = t.center;
        v += t.sign * g(p);
    }
    return v;
}

Line2D CoxeterOdd::line(int k) const
{
    return Line2D::through(motion_.translation, motion_.angle + std::numbers::pi * k / lines_);
}

Phantom::Phantom(Variant v) : v_(std::move(v))
{
    if (const auto* g = std::get_if<GaussianBump>(&v_); g && !(g->width > 0.0))
        throw std::invalid_argument("gaussian width must be positive");
    if (const auto* d = std::get_if<SmoothDisk>(&v_); d && !(d->radius > 0.0 && d->edge > 0.0))
        throw std::invalid_argument("smooth disk radius and edge must be positive");
    if (const auto* s = std::get_if<BumpSum>(&v_)) {
        if (s->bumps.empty())
            throw std::invalid_argument("bump sum needs at least one bump");
        for (const auto& b : s->bumps)
            if (!(b.radius > 0.0))
                throw std::invalid_argument("bump radius must be positive");
    }
}

double Phantom::operator()(Point2 p) const
{
    return std::visit([p](const auto& x) { return x(p); }, v_);
}

Point2 Phantom::bounding_center() const
{
    struct Visitor
    {
        Point2 operator()(const GaussianBump& g) const { return g.center; }
        Point2 operator()(const SmoothDisk& d) const { return d.center; }
        Point2 operator()(const BumpSum& s) const
        {
            Point2 c;
            for (const auto& b : s.bumps)
                c += b.center;
            return (1.0 / s.bumps.size()) * c;
        }
        Point2 operator()(const CoxeterOdd& c) const { return c.motion().translation; }
    };
    return std::visit(Visitor{}, v_);
}

double Phantom::bounding_radius() const
{
    const Point2 o = bounding_center();
    struct Visitor
    {
        Point2 o;
        double operator()(const GaussianBump& g) const { return g.support_radius(); }
        double operator()(const SmoothDisk& d) const { return d.support_radius(); }
        double operator()(const BumpSum& s) const
        {
            double r = 0.0;
            for (const auto& b : s.bumps)
                r = std::max(r, distance(b.center, o) + b.radius);
            return r;
        }
        double operator()(const CoxeterOdd& c) const { return norm(c.base().center) + c.base().support_radius(); }
    };
    return std::visit(Visitor{o}, v_);
}

std::string Phantom::kind() const
{
    struct Visitor
    {
        std::string operator()(const GaussianBump&) const { return "gaussian"; }
        std::string operator()(const SmoothDisk&) const { return "disk"; }
        std::string operator()(const BumpSum&) const { return "bump-sum"; }
        std::string operator()(const CoxeterOdd&) const { return "coxeter-odd"; }
    };
    return std::visit(Visitor{}, v_);
}

Phantom Phantom::scaled(double s) const
{
    struct Visitor
    {
        double s;
        Variant operator()(GaussianBump g) const { g.amplitude *= s; return g; }
        Variant operator()(SmoothDisk d) const { d.amplitude *= s; return d; }
        Variant operator()(BumpSum b) const
        {
            for (auto& x : b.bumps)
                x.amplitude *= s;
            return b;
        }
        Variant operator()(const CoxeterOdd& c) const
        {
            GaussianBump base = c.base();
            base.amplitude *= s;
            return CoxeterOdd(base, c.lines(), c.motion());
        }
    };
    return Phantom(std::visit(Visitor{s}, v_));
}

ScalarField2D sample_phantom(const Phantom& p, const Grid2D& g)
{
    const Point2 c = p.bounding_center();
    const double r = p.bounding_radius();
    const Point2 lo = g.origin(), hi = g.upper();
    const double tol = 1e-12 * (1.0 + r);
    if (c.x - r < lo.x - tol || c.x + r > hi.x + tol || c.y - r < lo.y - tol || c.y + r > hi.y + tol)
        throw std::invalid_argument("phantom support (" + p.kind() + ") exceeds the grid rectangle");
    return ScalarField2D(g, [&p](Point2 x) { return p(x); });
}

ScalarField2D make_coxeter_odd(const GaussianBump& base, int lines, const RigidMotion2D& motion, const Grid2D& g)
{
    return sample_phantom(Phantom(CoxeterOdd(base, lines, motion)), g);
}

} // namespace cradon
