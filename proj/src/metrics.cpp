#include "cradon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace cradon {

namespace {

struct Move
{
    int dx, dy;
    int via_count;
    int via[2][2];
};

// 16-neighbour stencil with the nodes each move passes between.
std::vector<Move> lattice_moves()
{
    std::vector<Move> moves;
    for (int sx : {-1, 1}) {
        moves.push_back({sx, 0, 0, {}});
        moves.push_back({0, sx, 0, {}});
    }
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            moves.push_back({sx, sy, 2, {{sx, 0}, {0, sy}}});
            moves.push_back({2 * sx, sy, 2, {{sx, 0}, {sx, sy}}});
            moves.push_back({sx, 2 * sy, 2, {{0, sy}, {sx, sy}}});
        }
    return moves;
}

std::vector<char> support_mask(const ScalarField2D& f, double tau)
{
    const double m = f.max_abs();
    std::vector<char> mask(f.size(), 0);
    if (!(m > 0.0))
        return mask;
    for (std::size_t k = 0; k < f.size(); ++k)
        mask[k] = std::abs(f[k]) >= tau * m;
    return mask;
}

double euclid_to_mask(Point2 x, const Grid2D& g, const std::vector<char>& mask)
{
    double d = kInfinity;
    for (std::size_t k = 0; k < mask.size(); ++k)
        if (mask[k])
            d = std::min(d, distance(x, g.node(k)));
    return d;
}

bool close(double a, double b, double tol)
{
    if (std::isinf(a) || std::isinf(b))
        return a == b;
    return std::abs(a - b) <= tol;
}

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

} // namespace

ComponentLabeling label_components(const Grid2D& g, const CenterSet& S)
{
    ComponentLabeling lab{g, std::vector<int>(g.size(), 0), 0};
    const double thickness = 0.5 * g.h() * (1.0 + 1e-9);
    std::size_t free_nodes = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (S.distance_to(g.node(k)) <= thickness)
            lab.labels[k] = ComponentLabeling::kObstacle;
        else
            ++free_nodes;
    }
    if (free_nodes == 0)
        throw std::domain_error("every grid node lies on the center set");

    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < g.size(); ++seed) {
        if (lab.labels[seed] != 0)
            continue;
        const int id = ++lab.count;
        lab.labels[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
            const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
            for (const auto& n : nb) {
                if (n[0] < 0 || n[1] < 0 || n[0] >= g.nx() || n[1] >= g.ny())
                    continue;
                const std::size_t q = g.index(n[0], n[1]);
                if (lab.labels[q] == 0) {
                    lab.labels[q] = id;
                    stack.push_back(q);
                }
            }
        }
    }
    return lab;
}

ComponentLabeling free_labeling(const Grid2D& g)
{
    return ComponentLabeling{g, std::vector<int>(g.size(), 1), 1};
}

DistanceField euclidean_distance(Point2 source, const Grid2D& g)
{
    DistanceField df{source, g.nearest_index(source), g, std::vector<double>(g.size()), MetricKind::Euclidean, 0};
    for (std::size_t k = 0; k < g.size(); ++k)
        df.distance[k] = distance(source, g.node(k));
    return df;
}

DistanceField obstacle_distance(Point2 source, const ComponentLabeling& lab, std::optional<int> restrict_to)
{
    const Grid2D& g = lab.grid;
    const std::size_t src = g.nearest_index(source);
    if (lab.obstacle(src))
        throw std::invalid_argument("source lies on the obstacle");
    if (restrict_to && lab.labels[src] != *restrict_to)
        throw std::invalid_argument("source is not in component " + std::to_string(*restrict_to));

    DistanceField df{g.node(src), src, g, std::vector<double>(g.size(), kInfinity),
                     restrict_to ? MetricKind::Interior : MetricKind::Obstacle, restrict_to.value_or(0)};
    auto passable = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny())
            return false;
        const int l = lab.labels[g.index(i, j)];
        if (l == ComponentLabeling::kObstacle)
            return false;
        return !restrict_to || l == *restrict_to;
    };

    static const std::vector<Move> moves = lattice_moves();
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    df.distance[src] = 0.0;
    queue.push({0.0, src});
    while (!queue.empty()) {
        const auto [d, k] = queue.top();
        queue.pop();
        if (d > df.distance[k])
            continue;
        const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
        for (const Move& m : moves) {
            if (!passable(i + m.dx, j + m.dy))
                continue;
            bool blocked = false;
            for (int v = 0; v < m.via_count && !blocked; ++v)
                blocked = !passable(i + m.via[v][0], j + m.via[v][1]);
            if (blocked)
                continue;
            const std::size_t q = g.index(i + m.dx, j + m.dy);
            const double nd = d + g.h() * std::hypot(m.dx, m.dy);
            if (nd < df.distance[q]) {
                df.distance[q] = nd;
                queue.push({nd, q});
            }
        }
    }
    return df;
}

double dist_to_set(const DistanceField& df, const std::vector<char>& mask)
{
    if (mask.size() != df.distance.size())
        throw std::invalid_argument("mask does not match the distance grid");
    double d = kInfinity;
    for (std::size_t k = 0; k < mask.size(); ++k)
        if (mask[k])
            d = std::min(d, df.distance[k]);
    return d;
}

MetricBall metric_ball(const DistanceField& df, double r)
{
    if (!(r >= 0.0))
        throw std::invalid_argument("ball radius must be nonnegative");
    MetricBall b{df.source, r, std::vector<char>(df.distance.size(), 0)};
    for (std::size_t k = 0; k < df.distance.size(); ++k)
        b.mask[k] = std::isinf(r) ? !std::isinf(df.distance[k]) : df.distance[k] < r;
    return b;
}

double metric_tolerance(double d, double h)
{
    return (std::isfinite(d) ? 0.03 * d : 0.0) + 2.0 * h;
}

HalvesReport check_halves(const ScalarField2D& f, const CenterSet& S, Point2 x, double tau)
{
    const Grid2D& g = f.grid();
    const double h = g.h();
    const ComponentLabeling lab = label_components(g, S);
    HalvesReport rep;
    rep.x = x;
    rep.euclidean.assign(static_cast<std::size_t>(lab.count), kInfinity);
    rep.interior.assign(static_cast<std::size_t>(lab.count), kInfinity);

    const std::vector<char> supp = support_mask(f, tau);
    rep.empty_support = std::none_of(supp.begin(), supp.end(), [](char c) { return c != 0; });
    rep.global_distance = euclid_to_mask(x, g, supp);

    std::vector<std::vector<char>> per(static_cast<std::size_t>(lab.count), std::vector<char>(g.size(), 0));
    for (std::size_t k = 0; k < g.size(); ++k)
        if (supp[k] && !lab.obstacle(k))
            per[static_cast<std::size_t>(lab.labels[k] - 1)][k] = 1;
    for (int j = 1; j <= lab.count; ++j)
        rep.euclidean[static_cast<std::size_t>(j - 1)] = euclid_to_mask(x, g, per[static_cast<std::size_t>(j - 1)]);

    const std::size_t xn = g.nearest_index(x);
    rep.on_S = lab.obstacle(xn) || S.distance_to(x) <= 0.5 * h;

    // a source node per relevant component
    std::vector<std::pair<int, std::size_t>> sources;
    if (rep.on_S) {
        for (int j = 1; j <= lab.count; ++j) {
            double best = kInfinity;
            std::size_t node = 0;
            for (std::size_t k = 0; k < g.size(); ++k)
                if (lab.labels[k] == j && distance(x, g.node(k)) < best) {
                    best = distance(x, g.node(k));
                    node = k;
                }
            if (best <= 2.5 * h)
                sources.push_back({j, node});
        }
    } else {
        sources.push_back({lab.labels[xn], xn});
    }

    for (const auto& [j, node] : sources) {
        rep.adjacent.push_back(j);
        const DistanceField df = obstacle_distance(g.node(node), lab, j);
        const double d = dist_to_set(df, per[static_cast<std::size_t>(j - 1)]);
        rep.interior[static_cast<std::size_t>(j - 1)] = d + distance(x, g.node(node));
    }
    if (rep.empty_support)
        return rep;

    for (int j : rep.adjacent) {
        const double e = rep.euclidean[static_cast<std::size_t>(j - 1)];
        const double in = rep.interior[static_cast<std::size_t>(j - 1)];
        if (!close(e, in, metric_tolerance(e, h))) {
            rep.equality_holds = false;
            rep.violations.push_back("component " + std::to_string(j) + ": dist " + num(e) + " != interior dist " + num(in));
        }
        if (rep.on_S && !close(e, rep.global_distance, metric_tolerance(rep.global_distance, h))) {
            rep.equality_holds = false;
            rep.violations.push_back("component " + std::to_string(j) + ": dist " + num(e) + " != dist to supp f " +
                                     num(rep.global_distance));
        }
        for (int k = 1; k <= lab.count; ++k) {
            const double ek = rep.euclidean[static_cast<std::size_t>(k - 1)];
            if (k != j && !(e <= ek + metric_tolerance(ek, h))) {
                rep.inequality_holds = false;
                rep.violations.push_back("component " + std::to_string(j) + ": dist " + num(e) + " > dist into component " +
                                         std::to_string(k) + " " + num(ek));
            }
        }
    }
    if (!rep.holds())
        rep.violations.push_back("necessary condition for R_S f = 0 fails");
    return rep;
}

PieceReport check_piece(const ScalarField2D& f, const CenterSet& S, Point2 p, double tau)
{
    const Grid2D& g = f.grid();
    const ComponentLabeling lab = label_components(g, S);
    const std::size_t pn = g.nearest_index(p);
    if (lab.obstacle(pn) || S.distance_to(p) <= 0.5 * g.h())
        throw std::invalid_argument("point lies on the center set");
    PieceReport rep;
    rep.p = p;
    const std::vector<char> supp = support_mask(f, tau);
    rep.empty_support = std::none_of(supp.begin(), supp.end(), [](char c) { return c != 0; });
    if (rep.empty_support)
        return rep;

    std::vector<char> reachable(supp);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (lab.obstacle(k))
            reachable[k] = 0;
    const DistanceField df = obstacle_distance(p, lab);
    rep.obstacle_distance = dist_to_set(df, reachable) + distance(p, g.node(pn));
    rep.euclidean_distance = euclid_to_mask(p, g, supp);
    rep.tolerance = metric_tolerance(rep.euclidean_distance, g.h());
    rep.holds = close(rep.obstacle_distance, rep.euclidean_distance, rep.tolerance);
    return rep;
}

std::string format_report(const HalvesReport& r)
{
    std::ostringstream os;
    os << "check_halves x=(" << num(r.x.x) << ", " << num(r.x.y) << ") on_S=" << (r.on_S ? "yes" : "no")
       << " empty_support=" << (r.empty_support ? "yes" : "no") << "\n";
    os << "dist(x, supp f) = " << num(r.global_distance) << "\n";
    os << "component,adjacent,euclidean,interior\n";
    for (std::size_t j = 0; j < r.euclidean.size(); ++j) {
        const bool adj = std::find(r.adjacent.begin(), r.adjacent.end(), static_cast<int>(j + 1)) != r.adjacent.end();
        os << (j + 1) << "," << (adj ? 1 : 0) << "," << num(r.euclidean[j]) << "," << num(r.interior[j]) << "\n";
    }
    os << "equality " << (r.equality_holds ? "PASS" : "FAIL") << "\n";
    os << "inequality " << (r.inequality_holds ? "PASS" : "FAIL") << "\n";
    for (const auto& v : r.violations)
        os << "violation: " << v << "\n";
    return os.str();
}

std::string format_report(const PieceReport& r)
{
    std::ostringstream os;
    os << "check_piece p=(" << num(r.p.x) << ", " << num(r.p.y) << ") empty_support=" << (r.empty_support ? "yes" : "no")
       << "\n";
    os << "dist_S = " << num(r.obstacle_distance) << "\n";
    os << "dist = " << num(r.euclidean_distance) << "\n";
    os << "tolerance = " << num(r.tolerance) << "\n";
    os << "equality " << (r.holds ? "PASS" : "FAIL") << "\n";
    return os.str();
}

void write_distance_csv(std::ostream& os, const DistanceField& df)
{
    os << std::setprecision(17) << "i,j,x,y,distance\n";
    for (std::size_t k = 0; k < df.distance.size(); ++k) {
        const Point2 p = df.grid.node(k);
        os << (k % df.grid.nx()) << "," << (k / df.grid.nx()) << "," << p.x << "," << p.y << ",";
        if (std::isinf(df.distance[k]))
            os << "inf";
        else
            os << df.distance[k];
        os << "\n";
    }
}

} // namespace cradon
