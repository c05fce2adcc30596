#pragma once

#include "cradon/grid.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cradon {

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kScenarioNames[] = {"forward",     "coxeter-witness",      "wave-crosscheck",
                                                 "metric-theorems", "injectivity-verdict", "reconstruct",
                                                 "full-suite"};

struct ExperimentConfig
{
    // [run]
    std::string scenario;
    std::uint64_t seed = 20240607;
    int workers = 1;
    std::string output = "cradon-out";

    // [grid] sampling grid for fields
    double grid_h = 0.02;
    double grid_half_extent = 1.5;
    Point2 grid_center{0.0, 0.0};

    // [phantom]
    std::string phantom_kind;
    Point2 phantom_center{0.3, 0.2};
    double phantom_width = 0.15;
    double phantom_amplitude = 1.0;
    double phantom_radius = 0.4;
    double phantom_edge = 0.1;
    /// x y radius amplitude per bump (bump-sum)
    std::vector<std::vector<double>> phantom_bumps;

    // [coxeter] witness base bump and line system
    int coxeter_lines = 0;
    double coxeter_rotation = 0.0;
    Point2 coxeter_shift{0.0, 0.0};
    /// distance of the base bump from the origin, on the bisector of the first sector
    double coxeter_base_distance = 1.0;
    /// 0: largest width whose support stays clear of the lines
    double coxeter_width = 0.0;

    // [centers]
    std::string centers_kind;
    Point2 centers_point{0.0, 0.0};
    double centers_angle = 0.0;
    double centers_half_window = 3.0;
    double centers_ds = 0.05;
    double centers_radius = 1.0;
    int centers_count = 64;
    std::vector<Point2> centers_vertices;

    // [radii]
    double radii_min = 0.0;
    double radii_max = 2.0;
    int radii_count = 80;

    // [window] operator discretization
    int window_nodes = 20;
    /// 0: nodes span [-1/2, 1/2]
    double window_h = 0.0;

    // [solver]
    int n_theta = 256;
    double cfl = 0.5;
    int max_iter = 2000;
    double tol = 1e-10;
    double threshold = 1e-6;
    double tau = 1e-8;
    double time = 1.5;
    std::vector<Point2> probes;
    /// auto | none | integer
    std::string expect_near_kernel = "auto";

    /// Every key with its effective value, in declaration order.
    std::vector<std::pair<std::string, std::string>> echo;
    std::string source;

    double effective_window_h() const { return window_h > 0.0 ? window_h : 1.0 / (window_nodes - 1); }
};

/// Flat `[section]` / `key = value` format with `#` comments.
ExperimentConfig parse_config(std::string_view text, std::string source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// The documented keys with defaults, as a config file.
std::string default_config_text(const std::string& scenario);

} // namespace cradon
