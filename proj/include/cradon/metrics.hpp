#pragma once

#include "cradon/field.hpp"
#include "cradon/geometry.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cradon {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Worst-case overestimate of the 16-neighbour lattice metric, 1/cos(atan(1/2)/2) - 1.
inline constexpr double kLatticeTolerance = 0.028;

/// Connected components of the grid nodes not covered by S.
struct ComponentLabeling
{
    static constexpr int kObstacle = -1;

    Grid2D grid;
    std::vector<int> labels; // 1..count, or kObstacle
    int count = 0;

    bool obstacle(std::size_t k) const { return labels[k] == kObstacle; }
};

/// Obstacle = nodes within h/2 of S; the rest is flood-filled with
/// 4-adjacency.
ComponentLabeling label_components(const Grid2D& g, const CenterSet& S);
/// No obstacle at all (one component).
ComponentLabeling free_labeling(const Grid2D& g);

enum class MetricKind { Euclidean, Obstacle, Interior };

struct DistanceField
{
    Point2 source;
    std::size_t source_index = 0;
    Grid2D grid;
    std::vector<double> distance; // kInfinity for unreachable nodes
    MetricKind kind = MetricKind::Obstacle;
    int component = 0; // for MetricKind::Interior
};

/// Exact Euclidean distances from `source` to every node.
DistanceField euclidean_distance(Point2 source, const Grid2D& g);

/// Dijkstra on the 16-neighbour lattice (axis, diagonal and knight moves,
/// Euclidean weights). A move is forbidden when an endpoint or a node it
/// passes between is an obstacle, or (restricted variant) lies outside the
/// component. The source snaps to its nearest node.
DistanceField obstacle_distance(Point2 source, const ComponentLabeling& labeling,
                                std::optional<int> restrict_to = std::nullopt);

/// min of df over the mask; +inf for an empty mask.
double dist_to_set(const DistanceField& df, const std::vector<char>& mask);

struct MetricBall
{
    Point2 source;
    double radius;
    std::vector<char> mask;
};

MetricBall metric_ball(const DistanceField& df, double r);

/// 3% + 2h, the tolerance budget of the distance checkers.
double metric_tolerance(double d, double h);

struct HalvesReport
{
    Point2 x;
    bool on_S = false;
    bool empty_support = false;
    double global_distance = kInfinity;   // dist(x, supp f)
    std::vector<double> euclidean;        // per component (index j-1)
    std::vector<double> interior;         // per component; +inf where not computed
    std::vector<int> adjacent;            // components whose closure contains x
    bool equality_holds = true;
    bool inequality_holds = true;
    std::vector<std::string> violations;

    bool holds() const { return equality_holds && inequality_holds; }
};

/// Distance equalities that R_S f = 0 forces at a point x.
HalvesReport check_halves(const ScalarField2D& f, const CenterSet& S, Point2 x, double tau = 1e-8);

struct PieceReport
{
    Point2 p;
    bool empty_support = false;
    double obstacle_distance = kInfinity; // dist_S(p, supp f)
    double euclidean_distance = kInfinity; // dist(p, supp f)
    double tolerance = 0.0;
    bool holds = true;
};

/// dist_S(p, supp f) = dist(p, supp f). Throws if p lies on S.
PieceReport check_piece(const ScalarField2D& f, const CenterSet& S, Point2 p, double tau = 1e-8);

std::string format_report(const HalvesReport& r);
std::string format_report(const PieceReport& r);

/// CSV "i,j,x,y,distance" (unreachable written as inf).
void write_distance_csv(std::ostream& os, const DistanceField& df);

} // namespace cradon
