#include "cradon/geometry.hpp"
#include "cradon/phantom.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace cradon;

namespace {

// Samples lie on S, consecutive samples are at most ds apart along S, and
// every point of S is within ds/2 of a sample (the cross stores its shared
// origin once, so index order alone does not show the spacing).
void check_on_geometry_and_spacing(const CenterSet& S, double ds)
{
    double off = 0.0, chord_excess = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
        off = std::max(off, S.distance_to(S.samples()[k].pos));
        const double step = k ? S.samples()[k].s - S.samples()[k - 1].s : 0.0;
        if (step > 0.0 && step <= ds * (1.0 + 1e-12))
            chord_excess = std::max(chord_excess, distance(S.samples()[k].pos, S.samples()[k - 1].pos) - step);
    }
    double cover = 0.0;
    const int probes = static_cast<int>(10.0 * S.total_length() / ds);
    for (int m = 0; m <= probes; ++m) {
        const Point2 q = S.point_at(S.total_length() * m / probes);
        double d = 1e300;
        for (const auto& c : S.samples())
            d = std::min(d, distance(q, c.pos));
        cover = std::max(cover, d);
    }
    CHECK(off <= 1e-12);
    CHECK(chord_excess <= 1e-12);
    CHECK(cover <= 0.5 * ds * (1.0 + 1e-9));
}

bool brute_line_meets_hull(const TangentLine& L, const ConvexHull2D& H)
{
    const Line2D line(L.base, L.direction);
    const auto& v = H.vertices;
    if (v.size() == 1)
        return line.signed_distance(v[0]) == 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double a = line.signed_distance(v[k]), b = line.signed_distance(v[(k + 1) % v.size()]);
        if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0))
            return true;
    }
    return false;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("circle samples sit at equal angles on the circle")
{
    const Point2 o{0.3, -0.7};
    const CenterSet S = CenterSet::circle(o, 1.7, 48);
    REQUIRE(S.size() == 48);
    for (int k = 0; k < 48; ++k) {
        const Point2 p = S.samples()[k].pos;
        CHECK(std::abs(distance(p, o) - 1.7) <= 1e-12);
        const Point2 want = o + 1.7 * unit_vector(2.0 * std::numbers::pi * k / 48);
        CHECK(distance(p, want) <= 1e-12);
    }
    check_on_geometry_and_spacing(S, S.ds());
    CHECK_THROWS_AS(CenterSet::circle(o, 0.0, 10), std::invalid_argument);
}

TEST_CASE("line sample count and collinearity")
{
    for (double T : {1.0, 2.5, 3.0}) {
        for (double ds : {0.05, 0.07, 0.3}) {
            const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, T, ds);
            CHECK(S.size() == static_cast<std::size_t>(std::ceil(2.0 * T / ds - 1e-9)) + 1);
            for (const auto& c : S.samples())
                CHECK(std::abs(c.pos.y) == 0.0);
            CHECK(S.samples().front().pos.x == doctest::Approx(-T));
            CHECK(S.samples().back().pos.x == doctest::Approx(T));
            check_on_geometry_and_spacing(S, ds);
        }
    }
    const CenterSet tilted = CenterSet::line({0.2, -0.4}, unit_vector(0.7), 2.0, 0.03);
    check_on_geometry_and_spacing(tilted, 0.03);
}

TEST_CASE("invalid sampling parameters are rejected")
{
    CHECK_THROWS_AS(CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::coxeter_cross(2, {}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::coxeter_cross(0, {}, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::polyline({{0.0, 0.0}, {1.0, 0.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::polyline({{0.0, 0.0}}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(CenterSet::points({}), std::invalid_argument);
}

TEST_CASE("the two-line cross samples both coordinate axes")
{
    const CenterSet S = CenterSet::coxeter_cross(2, {}, 2.0, 0.1);
    std::size_t on_x = 0, on_y = 0;
    for (const auto& c : S.samples()) {
        const bool x_axis = std::abs(c.pos.y) <= 1e-12, y_axis = std::abs(c.pos.x) <= 1e-12;
        CHECK((x_axis || y_axis));
        on_x += x_axis;
        on_y += y_axis;
    }
    CHECK(on_x == 41);
    CHECK(on_y == 41);
    CHECK(S.size() == 81); // the origin once
    check_on_geometry_and_spacing(S, 0.1);

    const CenterSet moved = CenterSet::coxeter_cross(3, {0.4, {0.5, -0.2}}, 1.5, 0.05);
    check_on_geometry_and_spacing(moved, 0.05);
}

TEST_CASE("polyline samples")
{
    const CenterSet S = CenterSet::polyline({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.7}, {0.2, 1.3}}, 0.04);
    CHECK(S.total_length() == doctest::Approx(1.0 + 0.7 + 1.0));
    check_on_geometry_and_spacing(S, 0.04);
    CHECK(distance(S.samples().back().pos, {0.2, 1.3}) <= 1e-12);
}

TEST_CASE("tangent examples")
{
    const Point2 o{0.5, -0.25};
    const CenterSet circle = CenterSet::circle(o, 0.8, 64);
    const TangentLine t0 = tangent_at(circle, 0.0);
    CHECK(distance(t0.base, {1.3, -0.25}) <= 1e-12);
    CHECK(distance(t0.direction, {0.0, 1.0}) <= 1e-12);
    for (const auto& c : circle.samples()) {
        const TangentLine t = tangent_at(circle, c.s);
        CHECK(std::abs(norm(t.direction) - 1.0) <= 1e-12);
        CHECK(std::abs(dot(t.direction, t.base - o)) <= 1e-12);
        CHECK(distance(t.base, c.pos) <= 1e-12);
    }

    const CenterSet line = CenterSet::line({0.1, 0.2}, unit_vector(0.4), 2.0, 0.1);
    for (double s : {0.0, 0.7, 2.0, 3.3, 4.0}) {
        const TangentLine t = tangent_at(line, s);
        CHECK(std::abs(cross(t.direction, unit_vector(0.4))) <= 1e-12);
        CHECK(line.distance_to(t.base) <= 1e-12);
    }

    const CenterSet cross2 = CenterSet::coxeter_cross(2, {}, 2.0, 0.1);
    CHECK_THROWS_AS(tangent_at(cross2, 2.0), std::domain_error);
    CHECK_THROWS_AS(tangent_at(cross2, 6.0), std::domain_error);
    const TangentLine arm = tangent_at(cross2, 7.0); // second line, t = 1
    CHECK(distance(arm.base, {0.0, 1.0}) <= 1e-12);
    CHECK(std::abs(arm.direction.x) <= 1e-12);

    const CenterSet poly = CenterSet::polyline({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, 0.1);
    CHECK_THROWS_AS(tangent_at(poly, 1.0), std::domain_error);
    CHECK(distance(tangent_at(poly, 1.5).direction, {0.0, 1.0}) <= 1e-12);
    CHECK_THROWS_AS(tangent_at(CenterSet::points({{0.0, 0.0}}), 0.0), std::domain_error);
}

TEST_CASE("truncation window keeps every useful center")
{
    const Point2 c{0.5, 0.3};
    const double R = 0.2, rmax = 1.5;
    const double T = truncation_half_window({0.0, 0.0}, {1.0, 0.0}, c, R, rmax);
    // centers beyond the window cannot reach the support disk within rmax
    for (double t : {T + 1e-9, T + 0.1, -T - 1e-9, -T - 0.3})
        CHECK(distance({t, 0.0}, c) - R >= rmax - 1e-9);
    CHECK(distance({T, 0.0}, c) - R == doctest::Approx(rmax).epsilon(1e-12));
}

TEST_CASE("hull of a gaussian approximates its level disk")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.5, 0.01);
    const Point2 c = g.node(g.nearest_index({0.2, -0.1}));
    const double sigma = 0.12;
    const ScalarField2D f = sample_phantom(Phantom(GaussianBump{c, sigma, 1.0}), g);
    for (double tau : {1e-8, 1e-4, 1e-2}) {
        const double r = sigma * std::sqrt(std::log(1.0 / tau));
        const ConvexHull2D H = hull_of_support(f, tau);
        CHECK(H.contains(c));
        for (Point2 v : H.vertices)
            CHECK(distance(v, c) <= r + 1e-12);
        for (int k = 0; k < 64; ++k)
            CHECK(H.contains(c + (r - 2.0 * g.h()) * unit_vector(2.0 * std::numbers::pi * k / 64)));
    }
}

TEST_CASE("hull of two point-like bumps is an inflated segment")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, 0.02);
    const Point2 a = g.node(20, 30), b = g.node(70, 55);
    const double w = 0.5 * g.h();
    const ScalarField2D f = sample_phantom(Phantom(GaussianBump{a, w, 1.0}), g)
                            + sample_phantom(Phantom(GaussianBump{b, w, 1.0}), g);
    const double tau = 1e-3;
    const ConvexHull2D H = hull_of_support(f, tau);
    CHECK(H.contains(a));
    CHECK(H.contains(b));
    for (Point2 v : H.vertices)
        CHECK(segment_distance(v, a, b) <= 2.0 * g.h());

    // node enumeration: every passing node lies in the hull; every vertex passes
    const double m = f.max_abs();
    for (std::size_t k = 0; k < g.size(); ++k)
        if (std::abs(f[k]) >= tau * m)
            CHECK(H.contains(g.node(k)));
    for (Point2 v : H.vertices)
        CHECK(std::abs(f.sample(v)) >= tau * m);
}

TEST_CASE("hull is invariant under positive scaling and monotone in the threshold")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.5, 0.02);
    const ScalarField2D f = sample_phantom(Phantom(GaussianBump{{0.3, 0.1}, 0.15, 1.0}), g)
                            + sample_phantom(Phantom(GaussianBump{{-0.4, -0.2}, 0.1, -0.6}), g);
    const ConvexHull2D H = hull_of_support(f);
    for (double s : {4.0, 0.25, 3.7, 1e-3}) {
        const ConvexHull2D Hs = hull_of_support(f.scaled(s));
        REQUIRE(Hs.vertices.size() == H.vertices.size());
        for (std::size_t k = 0; k < H.vertices.size(); ++k)
            CHECK(Hs.vertices[k] == H.vertices[k]);
    }
    const double taus[] = {1e-10, 1e-8, 1e-5, 1e-2, 0.3};
    for (int k = 0; k + 1 < 5; ++k) {
        const ConvexHull2D big = hull_of_support(f, taus[k]), small = hull_of_support(f, taus[k + 1]);
        for (Point2 v : small.vertices)
            CHECK(big.contains(v));
    }
    CHECK_THROWS_AS(hull_of_support(ScalarField2D(g)), std::domain_error);
}

TEST_CASE("hull vertices are strictly convex and counterclockwise")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> pts;
        for (int k = 0; k < 40; ++k)
            pts.push_back({u(rng), u(rng)});
        pts.push_back({0.0, 0.0});
        pts.push_back({0.5, 0.5});
        pts.push_back({1.0, 1.0}); // collinear triple with an extreme point
        const ConvexHull2D H = convex_hull(pts);
        const auto& v = H.vertices;
        for (std::size_t k = 0; k < v.size(); ++k)
            CHECK(cross(v[(k + 1) % v.size()] - v[k], v[(k + 2) % v.size()] - v[k]) > 0.0);
        for (Point2 p : pts)
            CHECK(H.contains(p));
    }
}

TEST_CASE("line versus hull examples")
{
    const ConvexHull2D H = convex_hull({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.0, 0.5}});
    const HullIntersection inside = line_intersects_hull({{0.5, 0.25}, unit_vector(0.3)}, H);
    CHECK(inside.intersects);
    CHECK(inside.clearance < 0.0);

    const HullIntersection above = line_intersects_hull({{-3.0, 0.8}, {1.0, 0.0}}, H);
    CHECK_FALSE(above.intersects);
    CHECK(above.clearance == doctest::Approx(0.3).epsilon(1e-12));

    const HullIntersection touching = line_intersects_hull({{1.0, 0.5}, unit_vector(-std::numbers::pi / 4)}, H);
    CHECK(touching.intersects);
    CHECK(std::abs(touching.clearance) <= 1e-9);
}

TEST_CASE("line versus hull agrees with brute-force edge crossing")
{
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, std::numbers::pi);
    int hits = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Point2> pts;
        const Point2 c{u(rng), u(rng)};
        for (int k = 0; k < 6; ++k)
            pts.push_back(c + 0.4 * Point2{u(rng), u(rng)});
        const ConvexHull2D H = convex_hull(pts);
        const TangentLine L{{1.5 * u(rng), 1.5 * u(rng)}, unit_vector(ang(rng))};
        const HullIntersection r = line_intersects_hull(L, H);
        CHECK(r.intersects == brute_line_meets_hull(L, H));
        if (!r.intersects) {
            double d = 1e300;
            for (Point2 v : H.vertices)
                d = std::min(d, std::abs(Line2D(L.base, L.direction).signed_distance(v)));
            CHECK(r.clearance == doctest::Approx(d).epsilon(1e-12));
        }
        hits += r.intersects;
    }
    CHECK(hits > 100);
    CHECK(hits < 900);
}

TEST_CASE("center sample export")
{
    std::ostringstream os;
    write_center_samples(os, CenterSet::circle({0.0, 0.0}, 1.0, 4));
    CHECK(os.str().rfind("s,x,y\n0,1,0\n", 0) == 0);
}

}
