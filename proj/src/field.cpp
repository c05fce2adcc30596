#include "cradon/field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cradon {

ScalarField2D::ScalarField2D(const Grid2D& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField2D::ScalarField2D(const Grid2D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field value count does not match grid size");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("field values must be finite");
}

ScalarField2D::ScalarField2D(const Grid2D& grid, const std::function<double(Point2)>& fn)
    : grid_(grid), values_(grid.size())
{
    for (int j = 0; j < grid_.ny(); ++j)
        for (int i = 0; i < grid_.nx(); ++i)
            values_[grid_.index(i, j)] = fn(grid_.node(i, j));
}

double ScalarField2D::sample(Point2 p) const
{
    const BilinearStencil st = bilinear_stencil(grid_, p);
    double v = 0.0;
    for (int k = 0; k < st.count; ++k)
        v += st.weight[k] * values_[st.index[k]];
    return v;
}

double ScalarField2D::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double ScalarField2D::l2() const
{
    double s = 0.0;
    for (double v : values_)
        s += v * v;
    return std::sqrt(s);
}

ScalarField2D ScalarField2D::scaled(double s) const
{
    std::vector<double> out(values_);
    for (double& v : out)
        v *= s;
    return ScalarField2D(grid_, std::move(out));
}

namespace {
template <class Op>
ScalarField2D combine(const ScalarField2D& a, const ScalarField2D& b, Op op)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("fields live on different grids");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = op(a[k], b[k]);
    return ScalarField2D(a.grid(), std::move(out));
}
} // namespace

ScalarField2D operator+(const ScalarField2D& a, const ScalarField2D& b)
{
    return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField2D operator-(const ScalarField2D& a, const ScalarField2D& b)
{
    return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField2D reflect_field(const ScalarField2D& f, const Line2D& line)
{
    return ScalarField2D(f.grid(), [&](Point2 p) { return f.sample(line.reflect(p)); });
}

ScalarField2D even_part(const ScalarField2D& f, const Line2D& line)
{
    const ScalarField2D r = reflect_field(f, line);
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 0.5 * (f[k] + r[k]);
    return ScalarField2D(f.grid(), std::move(out));
}

ScalarField2D odd_part(const ScalarField2D& f, const Line2D& line)
{
    const ScalarField2D r = reflect_field(f, line);
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 0.5 * (f[k] - r[k]);
    return ScalarField2D(f.grid(), std::move(out));
}

void write_field(std::ostream& os, const ScalarField2D& f)
{
    const Grid2D& g = f.grid();
    os << std::setprecision(17);
    os << "# cradon-field v1\n";
    os << "nx " << g.nx() << "\n";
    os << "ny " << g.ny() << "\n";
    os << "origin " << g.origin().x << " " << g.origin().y << "\n";
    os << "h " << g.h() << "\n";
    os << "values\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i)
            os << (i ? "," : "") << f.at(i, j);
        os << "\n";
    }
}

ScalarField2D read_field(std::istream& is)
{
    std::string line;
    int nx = 0, ny = 0;
    Point2 origin;
    double h = 0.0;
    bool in_values = false;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!in_values) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "nx")
                ls >> nx;
            else if (key == "ny")
                ls >> ny;
            else if (key == "origin")
                ls >> origin.x >> origin.y;
            else if (key == "h")
                ls >> h;
            else if (key == "values")
                in_values = true;
            else
                throw std::runtime_error("unknown field header key '" + key + "'");
            if (ls.fail())
                throw std::runtime_error("malformed field header line: " + line);
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double v;
        while (ls >> v)
            values.push_back(v);
    }
    if (!in_values)
        throw std::runtime_error("field file has no values section");
    return ScalarField2D(Grid2D(origin, h, nx, ny), std::move(values));
}

void write_pgm(std::ostream& os, std::span<const double> values, int rows, int cols)
{
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != values.size())
        throw std::invalid_argument("pgm layout does not match value count");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v))
            continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;
    os << "P2\n" << cols << " " << rows << "\n255\n";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double v = values[static_cast<std::size_t>(r) * cols + c];
            const int level = std::isfinite(v) ? static_cast<int>(std::lround(255.0 * (v - lo) / span)) : 255;
            os << (c ? " " : "") << level;
        }
        os << "\n";
    }
}

void write_field_pgm(std::ostream& os, const ScalarField2D& f)
{
    const Grid2D& g = f.grid();
    std::vector<double> flipped(f.size());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            flipped[static_cast<std::size_t>(g.ny() - 1 - j) * g.nx() + i] = f.at(i, j);
    write_pgm(os, flipped, g.ny(), g.nx());
}

} // namespace cradon
