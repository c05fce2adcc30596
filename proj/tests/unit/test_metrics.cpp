#include "cradon/metrics.hpp"
#include "cradon/phantom.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace cradon;

namespace {

std::vector<char> single_node(const Grid2D& g, std::size_t k)
{
    std::vector<char> m(g.size(), 0);
    m[k] = 1;
    return m;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("component counts")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    CHECK(label_components(g, CenterSet::line({0.0, 0.1}, unit_vector(0.3), 3.0, h / 2)).count == 2);
    CHECK(label_components(g, CenterSet::circle({0.1, 0.0}, 0.6, 400)).count == 2);
    CHECK(label_components(g, CenterSet::coxeter_cross(2, {}, 3.0, h / 2)).count == 4);
    CHECK(label_components(g, CenterSet::coxeter_cross(3, {0.2, {0.1, 0.0}}, 3.0, h / 2)).count == 6);
    CHECK(free_labeling(g).count == 1);

    const Grid2D tiny({0.0, 0.0}, 1.0, 2, 2);
    CHECK_THROWS_AS(label_components(tiny, CenterSet::points({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}})),
                    std::domain_error);
}

TEST_CASE("labels agree with 4-connectivity")
{
    const double h = 0.05;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    const ComponentLabeling lab = label_components(g, CenterSet::coxeter_cross(2, {0.4, {}}, 3.0, h / 2));
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i + 1 < g.nx(); ++i) {
            const std::size_t a = g.index(i, j), b = g.index(i + 1, j);
            if (!lab.obstacle(a) && !lab.obstacle(b))
                CHECK(lab.labels[a] == lab.labels[b]);
        }
}

TEST_CASE("free lattice distances are within the stencil bound of Euclidean")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, 0.02);
    const Point2 s = g.node(30, 60);
    const DistanceField lat = obstacle_distance(s, free_labeling(g));
    const DistanceField euc = euclidean_distance(s, g);
    CHECK(lat.distance[lat.source_index] == 0.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(lat.distance[k] >= euc.distance[k] * (1.0 - 1e-12));
        if (euc.distance[k] > 0.0)
            worst = std::max(worst, lat.distance[k] / euc.distance[k] - 1.0);
    }
    CHECK(worst <= kLatticeTolerance);
    CHECK(worst > 0.02); // the bound is nearly attained off the stencil directions
}

TEST_CASE("shortest path around a segment")
{
    const double h = 0.01, L = 0.5, a = 0.6;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.2, h);
    const CenterSet seg = CenterSet::polyline({{0.0, -L}, {0.0, L}}, h / 2);
    const ComponentLabeling lab = label_components(g, seg);
    CHECK(lab.count == 1);
    const DistanceField df = obstacle_distance({-a, 0.0}, lab);
    const double d = df.distance[g.nearest_index({a, 0.0})];
    const double exact = 2.0 * std::sqrt(a * a + L * L);
    CHECK(std::abs(d - exact) <= 0.03 * exact);
    CHECK(d > 2.0 * a * 1.2); // the direct route is blocked
}

TEST_CASE("restricted metric and invalid sources")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    const ComponentLabeling lab = label_components(g, CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, h / 2));
    const Point2 up{0.2, 0.5}, down{0.2, -0.5};
    const int j = lab.labels[g.nearest_index(up)];
    const DistanceField r = obstacle_distance(up, lab, j);
    CHECK(std::isinf(r.distance[g.nearest_index(down)]));
    CHECK(std::isfinite(r.distance[g.nearest_index({-0.7, 0.9})]));
    CHECK(r.kind == MetricKind::Interior);
    CHECK_THROWS_AS(obstacle_distance({0.2, 0.0}, lab), std::invalid_argument);
    CHECK_THROWS_AS(obstacle_distance(down, lab, j), std::invalid_argument);
}

TEST_CASE("distance to a node set")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, 0.02);
    const Point2 s = g.node(10, 20);
    const DistanceField lat = obstacle_distance(s, free_labeling(g));
    const DistanceField euc = euclidean_distance(s, g);
    CHECK(dist_to_set(lat, single_node(g, lat.source_index)) == 0.0);
    const std::size_t q = g.index(77, 41);
    CHECK(dist_to_set(euc, single_node(g, q)) == doctest::Approx(distance(s, g.node(q))).epsilon(1e-14));
    CHECK(std::abs(dist_to_set(lat, single_node(g, q)) / distance(s, g.node(q)) - 1.0) <= kLatticeTolerance);
    CHECK(std::isinf(dist_to_set(lat, std::vector<char>(g.size(), 0))));
    CHECK_THROWS_AS(dist_to_set(lat, std::vector<char>(3, 1)), std::invalid_argument);
}

TEST_CASE("metric balls")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, 0.02);
    const Point2 s{0.1, -0.2};
    const DistanceField lat = obstacle_distance(s, free_labeling(g));
    CHECK(std::none_of(metric_ball(lat, 0.0).mask.begin(), metric_ball(lat, 0.0).mask.end(), [](char c) { return c; }));

    const double r = 0.6;
    const MetricBall b = metric_ball(lat, r);
    const Point2 snapped = g.node(lat.source_index);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double e = distance(snapped, g.node(k));
        if (e < r / (1.0 + kLatticeTolerance))
            CHECK(b.mask[k]);
        if (e >= r)
            CHECK_FALSE(b.mask[k]);
    }

    const ComponentLabeling lab = label_components(g, CenterSet::circle({0.0, 0.0}, 0.5, 300));
    const DistanceField inner = obstacle_distance({0.05, 0.0}, lab);
    const MetricBall all = metric_ball(inner, kInfinity);
    const int j = lab.labels[inner.source_index];
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(static_cast<bool>(all.mask[k]) == (lab.labels[k] == j));
    CHECK_THROWS_AS(metric_ball(lat, -1.0), std::invalid_argument);
}

TEST_CASE("restricted dominates obstacle dominates Euclidean")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    const ComponentLabeling lab = label_components(g, CenterSet::polyline({{-0.4, -0.6}, {0.1, 0.2}, {0.6, 0.1}}, h / 2));
    const Point2 s{-0.5, 0.5};
    const DistanceField ds = obstacle_distance(s, lab);
    const DistanceField dj = obstacle_distance(s, lab, lab.labels[ds.source_index]);
    const DistanceField de = euclidean_distance(g.node(ds.source_index), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (lab.obstacle(k))
            continue;
        CHECK(dj.distance[k] >= ds.distance[k]);
        CHECK(ds.distance[k] >= de.distance[k] * (1.0 - 1e-12));
    }
}

TEST_CASE("enlarging the obstacle never shortens a path")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    const ComponentLabeling small = label_components(g, CenterSet::polyline({{0.0, -0.3}, {0.0, 0.3}}, h / 2));
    const ComponentLabeling large = label_components(g, CenterSet::polyline({{0.0, -0.7}, {0.0, 0.7}, {0.4, 0.7}}, h / 2));
    const Point2 s{-0.5, 0.1};
    const DistanceField a = obstacle_distance(s, small), b = obstacle_distance(s, large);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!large.obstacle(k))
            CHECK(b.distance[k] >= a.distance[k]);
}

TEST_CASE("obstacle distance is symmetric and obeys the triangle inequality")
{
    const double h = 0.025;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, h);
    const ComponentLabeling lab = label_components(g, CenterSet::polyline({{-0.5, -0.2}, {0.3, 0.4}}, h / 2));
    std::mt19937_64 rng(20240607);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    auto free_node = [&] {
        std::size_t k;
        do
            k = pick(rng);
        while (lab.obstacle(k));
        return k;
    };
    double asym = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = free_node(), q = free_node(), r = free_node();
        const DistanceField dp = obstacle_distance(g.node(p), lab);
        const DistanceField dq = obstacle_distance(g.node(q), lab);
        asym = std::max(asym, std::abs(dp.distance[q] - dq.distance[p]));
        CHECK(dp.distance[r] <= dp.distance[q] + dq.distance[r] + 1e-12);
    }
    CHECK(asym <= 1e-9);
}

TEST_CASE("halves: odd field across a line")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.2, h);
    const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, h / 2);
    const ScalarField2D f = make_coxeter_odd(GaussianBump{{0.3, 0.5}, 0.07, 1.0}, 1, {}, g);
    for (Point2 x : {Point2{0.3, 0.0}, Point2{-0.4, 0.0}, Point2{0.9, 0.0}}) {
        const HalvesReport r = check_halves(f, S, x);
        CHECK(r.on_S);
        CHECK(r.adjacent.size() == 2);
        CHECK(r.holds());
        CHECK(r.euclidean[0] == doctest::Approx(r.euclidean[1]).epsilon(1e-9));
    }
    const HalvesReport off = check_halves(f, S, {0.2, 0.3});
    CHECK_FALSE(off.on_S);
    CHECK(off.adjacent.size() == 1);
    CHECK(off.holds());
}

TEST_CASE("halves: a bump on one side violates the condition")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.2, h);
    const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, h / 2);
    const ScalarField2D f = sample_phantom(Phantom(GaussianBump{{0.3, 0.6}, 0.08, 1.0}), g);
    const HalvesReport r = check_halves(f, S, {0.3, 0.0});
    CHECK(r.on_S);
    CHECK_FALSE(r.holds());
    int finite = 0, infinite = 0;
    for (int j : r.adjacent)
        (std::isinf(r.euclidean[static_cast<std::size_t>(j - 1)]) ? infinite : finite) += 1;
    CHECK(finite == 1);
    CHECK(infinite == 1);
    CHECK(format_report(r).find("necessary condition for R_S f = 0 fails") != std::string::npos);
}

TEST_CASE("halves: zero field")
{
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.0, 0.02);
    const HalvesReport r = check_halves(ScalarField2D(g), CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, 0.01), {0.1, 0.0});
    CHECK(r.empty_support);
    CHECK(std::isinf(r.global_distance));
    for (double d : r.euclidean)
        CHECK(std::isinf(d));
    for (double d : r.interior)
        CHECK(std::isinf(d));
}

TEST_CASE("piece examples")
{
    const double h = 0.02;
    const Grid2D g = Grid2D::centered({0.0, 0.0}, 1.5, h);
    const CenterSet line = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, h / 2);
    const ScalarField2D odd = make_coxeter_odd(GaussianBump{{0.2, 0.4}, 0.06, 1.0}, 1, {}, g);
    for (Point2 p : {Point2{-0.8, 0.3}, Point2{0.9, -1.1}, Point2{0.2, 1.2}}) {
        const PieceReport r = check_piece(odd, line, p);
        CHECK(r.holds);
        CHECK(std::abs(r.obstacle_distance - r.euclidean_distance) <= 0.03 * r.euclidean_distance + 2.0 * h);
    }
    CHECK_THROWS_AS(check_piece(odd, line, {0.3, 0.0}), std::invalid_argument);

    const ScalarField2D bump = sample_phantom(Phantom(GaussianBump{{0.1, 0.0}, 0.06, 1.0}), g);
    const PieceReport enclosed = check_piece(bump, CenterSet::circle({0.1, 0.0}, 0.6, 600), {1.1, 0.3});
    CHECK(std::isinf(enclosed.obstacle_distance));
    CHECK_FALSE(enclosed.holds);

    const PieceReport far = check_piece(bump, CenterSet::polyline({{-1.2, 1.0}, {-0.6, 1.3}}, h / 2), {0.9, 0.2});
    CHECK(far.holds);
    CHECK(std::abs(far.obstacle_distance / far.euclidean_distance - 1.0) <= kLatticeTolerance);
    CHECK(format_report(far).find("check_piece") == 0);
}

TEST_CASE("tolerance budget and distance export")
{
    CHECK(metric_tolerance(2.0, 0.01) == doctest::Approx(0.08));
    CHECK(metric_tolerance(kInfinity, 0.01) == doctest::Approx(0.02));
    const Grid2D g({0.0, 0.0}, 1.0, 2, 1 + 1);
    DistanceField df = euclidean_distance({0.0, 0.0}, g);
    df.distance[3] = kInfinity;
    std::ostringstream os;
    write_distance_csv(os, df);
    CHECK(os.str() == "i,j,x,y,distance\n0,0,0,0,0\n1,0,1,0,1\n0,1,0,1,1\n1,1,1,1,inf\n");
}

}
