#include "cradon/radon.hpp"

#include "cradon/parallel.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cradon {

namespace {

void check_n_theta(int n_theta)
{
    if (n_theta < 8 || n_theta % 2 != 0)
        throw std::invalid_argument("n_theta must be even and >= 8 (got " + std::to_string(n_theta) + ")");
}

template <class F>
Sinogram forward_impl(const F& f, const CenterSet& S, const RadiusGrid& radii, int n_theta, Normalization norm)
{
    check_n_theta(n_theta);
    const std::size_t m = static_cast<std::size_t>(radii.count());
    std::vector<double> values(S.size() * m);
    parallel_for(S.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const CenterSample& c = S.samples()[i];
            for (std::size_t j = 0; j < m; ++j) {
                const double r = radii.at(static_cast<int>(j));
                const double mean = circle_mean(f, c.pos, r, n_theta, c.phase);
                values[i * m + j] = norm == Normalization::Mean ? mean : 2.0 * std::numbers::pi * r * mean;
            }
        }
    });
    return Sinogram(S, radii, n_theta, norm, std::move(values));
}

} // namespace

RadiusGrid::RadiusGrid(double r_min, double r_max, int count) : r_min_(r_min), r_max_(r_max), count_(count)
{
    if (!(r_min >= 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw std::invalid_argument("radius grid needs 0 <= r_min < r_max");
    if (count < 2)
        throw std::invalid_argument("radius grid needs at least 2 radii");
}

const char* to_string(Normalization n)
{
    return n == Normalization::Mean ? "mean" : "surface-integral";
}

double radon_point(const ScalarField2D& f, Point2 p, double r, int n_theta, double phase)
{
    check_n_theta(n_theta);
    if (!(r >= 0.0))
        throw std::invalid_argument("radius must be nonnegative");
    return 2.0 * std::numbers::pi * r * circle_mean(f, p, r, n_theta, phase);
}

double radon_point(const Phantom& f, Point2 p, double r, int n_theta, double phase)
{
    check_n_theta(n_theta);
    if (!(r >= 0.0))
        throw std::invalid_argument("radius must be nonnegative");
    return 2.0 * std::numbers::pi * r * circle_mean(f, p, r, n_theta, phase);
}

Sinogram::Sinogram(CenterSet centers, RadiusGrid radii, int n_theta, Normalization norm, std::vector<double> values)
    : centers_(std::move(centers)), radii_(radii), n_theta_(n_theta), norm_(norm), values_(std::move(values))
{
    if (values_.size() != rows() * cols())
        throw std::invalid_argument("sinogram value count does not match centers x radii");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("sinogram values must be finite");
}

double Sinogram::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

Sinogram Sinogram::to_mean(const std::vector<double>& center_values) const
{
    if (norm_ == Normalization::Mean)
        return *this;
    if (center_values.size() != rows())
        throw std::invalid_argument("need one center value per sinogram row");
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) {
            const double r = radii_.at(static_cast<int>(j));
            out[i * cols() + j] = r > 0.0 ? at(i, j) / (2.0 * std::numbers::pi * r) : center_values[i];
        }
    return Sinogram(centers_, radii_, n_theta_, Normalization::Mean, std::move(out));
}

Sinogram Sinogram::to_surface() const
{
    if (norm_ == Normalization::SurfaceIntegral)
        return *this;
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j)
            out[i * cols() + j] = 2.0 * std::numbers::pi * radii_.at(static_cast<int>(j)) * at(i, j);
    return Sinogram(centers_, radii_, n_theta_, Normalization::SurfaceIntegral, std::move(out));
}

Sinogram forward_sinogram(const ScalarField2D& f, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                          Normalization norm)
{
    return forward_impl(f, S, radii, n_theta, norm);
}

Sinogram forward_sinogram(const Phantom& f, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                          Normalization norm)
{
    return forward_impl(f, S, radii, n_theta, norm);
}

Eigen::VectorXd OperatorMatrix::apply(const ScalarField2D& f) const
{
    if (!(f.grid() == window))
        throw std::invalid_argument("field is not defined on the operator window");
    const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(f.size()));
    return matrix * x;
}

OperatorMatrix build_operator_matrix(const Grid2D& window, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                                     std::size_t column_cap)
{
    check_n_theta(n_theta);
    if (window.size() > column_cap)
        throw std::length_error("operator window has " + std::to_string(window.size()) +
                                " nodes; raise the column cap to at least " + std::to_string(window.size()));
    const std::size_t m = static_cast<std::size_t>(radii.count());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S.size() * m), static_cast<Eigen::Index>(window.size()));
    const double dtheta = 2.0 * std::numbers::pi / n_theta;
    parallel_for(S.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> row(window.size());
        for (std::size_t i = begin; i < end; ++i) {
            const CenterSample& c = S.samples()[i];
            for (std::size_t j = 0; j < m; ++j) {
                const double r = radii.at(static_cast<int>(j));
                std::fill(row.begin(), row.end(), 0.0);
                for (int k = 0; k < n_theta; ++k) {
                    const double th = c.phase + k * dtheta;
                    const BilinearStencil st = bilinear_stencil(window, {c.pos.x + r * std::cos(th), c.pos.y + r * std::sin(th)});
                    for (int q = 0; q < st.count; ++q)
                        row[st.index[q]] += st.weight[q];
                }
                const double scale = 2.0 * std::numbers::pi * r / n_theta;
                const auto rix = static_cast<Eigen::Index>(i * m + j);
                for (std::size_t col = 0; col < row.size(); ++col)
                    if (row[col] != 0.0)
                        A(rix, static_cast<Eigen::Index>(col)) = scale * row[col];
            }
        }
    });
    return OperatorMatrix{window, S, radii, n_theta, std::move(A)};
}

ScalarField2D adjoint_apply(const Sinogram& g, const Grid2D& window)
{
    check_n_theta(g.n_theta());
    std::vector<double> out(window.size(), 0.0);
    const double dtheta = 2.0 * std::numbers::pi / g.n_theta();
    const auto& samples = g.centers().samples();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        const CenterSample& c = samples[i];
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double v = g.at(i, j);
            if (v == 0.0)
                continue;
            const double r = g.radii().at(static_cast<int>(j));
            const double scale = g.normalization() == Normalization::Mean ? 1.0 / g.n_theta()
                                                                          : 2.0 * std::numbers::pi * r / g.n_theta();
            for (int k = 0; k < g.n_theta(); ++k) {
                const double th = c.phase + k * dtheta;
                const BilinearStencil st = bilinear_stencil(window, {c.pos.x + r * std::cos(th), c.pos.y + r * std::sin(th)});
                for (int q = 0; q < st.count; ++q)
                    out[st.index[q]] += scale * st.weight[q] * v;
            }
        }
    }
    return ScalarField2D(window, std::move(out));
}

Eigen::VectorXd flatten(const Sinogram& s)
{
    return Eigen::Map<const Eigen::VectorXd>(s.values().data(), static_cast<Eigen::Index>(s.values().size()));
}

void write_sinogram(std::ostream& os, const Sinogram& s)
{
    os << std::setprecision(17);
    os << "# cradon-sinogram v1\n";
    os << "normalization " << to_string(s.normalization()) << "\n";
    os << "centers " << s.centers().describe() << "\n";
    os << "radii " << s.radii().r_min() << " " << s.radii().r_max() << " " << s.radii().count() << "\n";
    os << "n_theta " << s.n_theta() << "\n";
    os << "values\n";
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j)
            os << (j ? "," : "") << s.at(i, j);
        os << "\n";
    }
}

void write_operator_triplets(std::ostream& os, const OperatorMatrix& A)
{
    os << std::setprecision(17) << "row,col,value\n";
    for (Eigen::Index c = 0; c < A.matrix.cols(); ++c)
        for (Eigen::Index r = 0; r < A.matrix.rows(); ++r)
            if (A.matrix(r, c) != 0.0)
                os << r << "," << c << "," << A.matrix(r, c) << "\n";
}

} // namespace cradon
