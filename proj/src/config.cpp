#include "cradon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace cradon {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct KeyDef
{
    std::string name; // section.key
    std::string fallback;
    Setter set;
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v)
{
    double x = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError("expected a finite number, got '" + v + "'");
    return x;
}

long long to_integer(const std::string& v)
{
    long long x = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size())
        throw ConfigError("expected an integer, got '" + v + "'");
    return x;
}

/// "a b c; d e f" -> groups of `arity` numbers.
std::vector<std::vector<double>> to_groups(const std::string& v, std::size_t arity)
{
    std::vector<std::vector<double>> out;
    std::stringstream ss(v);
    std::string group;
    while (std::getline(ss, group, ';')) {
        std::istringstream gs(group);
        std::vector<double> nums;
        std::string tok;
        while (gs >> tok)
            nums.push_back(to_double(tok));
        if (nums.empty())
            continue;
        if (nums.size() != arity)
            throw ConfigError("expected groups of " + std::to_string(arity) + " numbers separated by ';'");
        out.push_back(std::move(nums));
    }
    return out;
}

std::vector<Point2> to_points(const std::string& v)
{
    std::vector<Point2> pts;
    for (const auto& g : to_groups(v, 2))
        pts.push_back({g[0], g[1]});
    return pts;
}

Point2 to_point(const std::string& v)
{
    const auto pts = to_points(v);
    if (pts.size() != 1)
        throw ConfigError("expected a point 'x y'");
    return pts.front();
}

Setter real(double ExperimentConfig::*m, double lo, double hi, bool open_lo = false)
{
    return [=](ExperimentConfig& c, const std::string& v) {
        const double x = to_double(v);
        if (x < lo || x > hi || (open_lo && x == lo)) {
            std::ostringstream os;
            os << "value " << x << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
            throw ConfigError(os.str());
        }
        c.*m = x;
    };
}

Setter integer(int ExperimentConfig::*m, long long lo, long long hi)
{
    return [=](ExperimentConfig& c, const std::string& v) {
        const long long x = to_integer(v);
        if (x < lo || x > hi)
            throw ConfigError("value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
        c.*m = static_cast<int>(x);
    };
}

Setter point(Point2 ExperimentConfig::*m)
{
    return [=](ExperimentConfig& c, const std::string& v) { c.*m = to_point(v); };
}

Setter points(std::vector<Point2> ExperimentConfig::*m)
{
    return [=](ExperimentConfig& c, const std::string& v) { c.*m = to_points(v); };
}

Setter choice(std::string ExperimentConfig::*m, std::vector<std::string> allowed)
{
    return [=](ExperimentConfig& c, const std::string& v) {
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed)
                list += (list.empty() ? "" : ", ") + a;
            throw ConfigError("'" + v + "' is not one of: " + list);
        }
        c.*m = v;
    };
}

const double kBig = 1e6;

const std::vector<KeyDef>& key_table()
{
    static const std::vector<KeyDef> table = {
        {"run.scenario", "", choice(&ExperimentConfig::scenario, {std::begin(kScenarioNames), std::end(kScenarioNames)})},
        {"run.seed", "20240607",
         [](ExperimentConfig& c, const std::string& v) {
             const long long x = to_integer(v);
             if (x < 0)
                 throw ConfigError("seed must be nonnegative");
             c.seed = static_cast<std::uint64_t>(x);
         }},
        {"run.workers", "1", integer(&ExperimentConfig::workers, 1, 256)},
        {"run.output", "cradon-out",
         [](ExperimentConfig& c, const std::string& v) {
             if (v.empty())
                 throw ConfigError("output directory must not be empty");
             c.output = v;
         }},

        {"grid.h", "0.02", real(&ExperimentConfig::grid_h, 0.0, 1.0, true)},
        {"grid.half_extent", "1.5", real(&ExperimentConfig::grid_half_extent, 0.0, 100.0, true)},
        {"grid.center", "0 0", point(&ExperimentConfig::grid_center)},

        {"phantom.kind", "", choice(&ExperimentConfig::phantom_kind, {"gaussian", "disk", "bump-sum", "coxeter-odd"})},
        {"phantom.center", "0.3 0.2", point(&ExperimentConfig::phantom_center)},
        {"phantom.width", "0.15", real(&ExperimentConfig::phantom_width, 0.0, 10.0, true)},
        {"phantom.amplitude", "1", real(&ExperimentConfig::phantom_amplitude, -kBig, kBig)},
        {"phantom.radius", "0.4", real(&ExperimentConfig::phantom_radius, 0.0, 10.0, true)},
        {"phantom.edge", "0.1", real(&ExperimentConfig::phantom_edge, 0.0, 10.0, true)},
        {"phantom.bumps", "",
         [](ExperimentConfig& c, const std::string& v) {
             c.phantom_bumps = to_groups(v, 4);
             for (const auto& b : c.phantom_bumps)
                 if (!(b[2] > 0.0))
                     throw ConfigError("bump radius must be positive");
         }},

        {"coxeter.lines", "", integer(&ExperimentConfig::coxeter_lines, 1, 64)},
        {"coxeter.rotation", "0", real(&ExperimentConfig::coxeter_rotation, -kBig, kBig)},
        {"coxeter.shift", "0 0", point(&ExperimentConfig::coxeter_shift)},
        {"coxeter.base_distance", "1", real(&ExperimentConfig::coxeter_base_distance, 0.0, 100.0, true)},
        {"coxeter.width", "0", real(&ExperimentConfig::coxeter_width, 0.0, 10.0)},

        {"centers.kind", "", choice(&ExperimentConfig::centers_kind, {"line", "circle", "coxeter", "polyline", "points"})},
        {"centers.point", "0 0", point(&ExperimentConfig::centers_point)},
        {"centers.angle", "0", real(&ExperimentConfig::centers_angle, -kBig, kBig)},
        {"centers.half_window", "3", real(&ExperimentConfig::centers_half_window, 0.0, 1000.0, true)},
        {"centers.ds", "0.05", real(&ExperimentConfig::centers_ds, 0.0, 100.0, true)},
        {"centers.radius", "1", real(&ExperimentConfig::centers_radius, 0.0, 1000.0, true)},
        {"centers.count", "64", integer(&ExperimentConfig::centers_count, 3, 100000)},
        {"centers.vertices", "", points(&ExperimentConfig::centers_vertices)},

        {"radii.min", "0", real(&ExperimentConfig::radii_min, 0.0, 1000.0)},
        {"radii.max", "2", real(&ExperimentConfig::radii_max, 0.0, 1000.0, true)},
        {"radii.count", "80", integer(&ExperimentConfig::radii_count, 2, 100000)},

        {"window.nodes", "20", integer(&ExperimentConfig::window_nodes, 2, 1000)},
        {"window.h", "0", real(&ExperimentConfig::window_h, 0.0, 100.0)},

        {"solver.n_theta", "256",
         [](ExperimentConfig& c, const std::string& v) {
             const long long x = to_integer(v);
             if (x % 2 != 0)
                 throw ConfigError("n_theta must be even (got " + std::to_string(x) +
                                   "); symmetric quadrature needs an even node count");
             if (x < 8 || x > 1 << 20)
                 throw ConfigError("n_theta must be at least 8");
             c.n_theta = static_cast<int>(x);
         }},
        {"solver.cfl", "0.5", real(&ExperimentConfig::cfl, 0.0, 0.5, true)},
        {"solver.max_iter", "2000", integer(&ExperimentConfig::max_iter, 1, 1000000)},
        {"solver.tol", "1e-10", real(&ExperimentConfig::tol, 0.0, 1.0, true)},
        {"solver.threshold", "1e-6", real(&ExperimentConfig::threshold, 0.0, 1.0, true)},
        {"solver.tau", "1e-8", real(&ExperimentConfig::tau, 0.0, 1.0, true)},
        {"solver.time", "1.5", real(&ExperimentConfig::time, 0.0, 100.0, true)},
        {"solver.probes", "", points(&ExperimentConfig::probes)},
        {"solver.expect_near_kernel", "auto",
         [](ExperimentConfig& c, const std::string& v) {
             if (v != "auto" && v != "none" && to_integer(v) < 0)
                 throw ConfigError("expect_near_kernel must be auto, none or a nonnegative integer");
             c.expect_near_kernel = v;
         }},
    };
    return table;
}

const std::map<std::string, std::vector<std::string>>& required_keys()
{
    static const std::map<std::string, std::vector<std::string>> req = {
        {"forward", {"phantom.kind", "centers.kind"}},
        {"coxeter-witness", {"coxeter.lines"}},
        {"wave-crosscheck", {}},
        {"metric-theorems", {}},
        {"injectivity-verdict", {"centers.kind"}},
        {"reconstruct", {"centers.kind", "phantom.kind"}},
        {"full-suite", {}},
    };
    return req;
}

} // namespace

ExperimentConfig parse_config(std::string_view text, std::string source)
{
    ExperimentConfig cfg;
    cfg.source = std::move(source);
    const auto& table = key_table();
    std::map<std::string, std::pair<std::string, int>> given; // value, line

    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    auto fail = [&](int line, const std::string& msg) -> ConfigError {
        return ConfigError(cfg.source + ":" + std::to_string(line) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw fail(line_no, "malformed section header '" + line + "'");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            const bool known = std::any_of(table.begin(), table.end(), [&](const KeyDef& k) {
                return k.name.compare(0, section.size() + 1, section + ".") == 0;
            });
            if (!known)
                throw fail(line_no, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw fail(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw fail(line_no, "missing key name");
        if (section.empty())
            throw fail(line_no, "key '" + key + "' appears before any [section]");
        const std::string full = section + "." + key;
        const auto it = std::find_if(table.begin(), table.end(), [&](const KeyDef& k) { return k.name == full; });
        if (it == table.end())
            throw fail(line_no, "unknown key '" + key + "' in section [" + section + "]");
        if (given.count(full))
            throw fail(line_no, "duplicate key '" + key + "' (first set on line " +
                                    std::to_string(given[full].second) + ")");
        try {
            it->set(cfg, value);
        } catch (const ConfigError& e) {
            throw fail(line_no, full + ": " + e.what());
        }
        given[full] = {value, line_no};
    }

    if (!given.count("run.scenario"))
        throw ConfigError(cfg.source + ": missing required key 'scenario' in [run]");
    for (const auto& k : required_keys().at(cfg.scenario))
        if (!given.count(k))
            throw ConfigError(cfg.source + ": scenario '" + cfg.scenario + "' requires key '" + k + "'");

    auto where = [&](const std::string& key) {
        const auto it = given.find(key);
        return it == given.end() ? cfg.source + ": " : cfg.source + ":" + std::to_string(it->second.second) + ": ";
    };
    if (cfg.radii_max <= cfg.radii_min)
        throw ConfigError(where("radii.max") + "radii.max must exceed radii.min");
    if (cfg.phantom_kind == "bump-sum" && cfg.phantom_bumps.empty())
        throw ConfigError(where("phantom.kind") + "bump-sum phantom needs phantom.bumps");
    if (cfg.centers_kind == "polyline" && cfg.centers_vertices.size() < 2)
        throw ConfigError(where("centers.kind") + "polyline centers need at least two centers.vertices");
    if (cfg.centers_kind == "points" && cfg.centers_vertices.empty())
        throw ConfigError(where("centers.kind") + "point centers need centers.vertices");
    if ((cfg.centers_kind == "coxeter" || cfg.phantom_kind == "coxeter-odd") && cfg.coxeter_lines < 1)
        throw ConfigError(where("centers.kind") + "coxeter geometry needs coxeter.lines");

    for (const auto& k : table) {
        const auto it = given.find(k.name);
        cfg.echo.emplace_back(k.name, it != given.end() ? it->second.first : k.fallback);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string default_config_text(const std::string& scenario)
{
    std::ostringstream os;
    std::string section;
    for (const auto& k : key_table()) {
        const auto dot = k.name.find('.');
        const std::string sec = k.name.substr(0, dot);
        if (sec != section) {
            os << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
            section = sec;
        }
        const std::string value = k.name == "run.scenario" ? scenario : k.fallback;
        if (value.empty())
            os << "# " << k.name.substr(dot + 1) << " =\n";
        else
            os << k.name.substr(dot + 1) << " = " << value << "\n";
    }
    return os.str();
}

} // namespace cradon
