#pragma once

#include "cradon/field.hpp"
#include "cradon/geometry.hpp"
#include "cradon/phantom.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <vector>

namespace cradon {

class RadiusGrid
{
public:
    RadiusGrid(double r_min, double r_max, int count);

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    int count() const { return count_; }
    double step() const { return (r_max_ - r_min_) / (count_ - 1); }
    double at(int j) const { return j == count_ - 1 ? r_max_ : r_min_ + j * step(); }

    friend bool operator==(const RadiusGrid&, const RadiusGrid&) = default;

private:
    double r_min_;
    double r_max_;
    int count_;
};

enum class Normalization { SurfaceIntegral, Mean };

const char* to_string(Normalization n);

/// Trapezoidal mean of f over |y - p| = r with nodes at phase + 2 pi k / n.
/// At r = 0 every node is p, so the mean is f(p).
template <class F>
double circle_mean(const F& f, Point2 p, double r, int n_theta, double phase = 0.0)
{
    double sum = 0.0;
    const double dtheta = 2.0 * std::numbers::pi / n_theta;
    for (int k = 0; k < n_theta; ++k) {
        const double th = phase + k * dtheta;
        sum += f(Point2{p.x + r * std::cos(th), p.y + r * std::sin(th)});
    }
    return sum / n_theta;
}

/// Rf(p, r): trapezoidal surface integral (2 pi r / n) sum f(p + r e^{i theta_k}).
double radon_point(const ScalarField2D& f, Point2 p, double r, int n_theta, double phase = 0.0);
double radon_point(const Phantom& f, Point2 p, double r, int n_theta, double phase = 0.0);

/// Rf(p_i, r_j) over sampled centers and radii, row i = center i.
class Sinogram
{
public:
    Sinogram(CenterSet centers, RadiusGrid radii, int n_theta, Normalization norm, std::vector<double> values);

    const CenterSet& centers() const { return centers_; }
    const RadiusGrid& radii() const { return radii_; }
    int n_theta() const { return n_theta_; }
    Normalization normalization() const { return norm_; }
    std::size_t rows() const { return centers_.size(); }
    std::size_t cols() const { return static_cast<std::size_t>(radii_.count()); }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
    const std::vector<double>& values() const { return values_; }
    double max_abs() const;

    /// Same data under the other normalization (factor 2 pi r). Mean values at
    /// r = 0 cannot be recovered from surface integrals and need `center_values`.
    Sinogram to_mean(const std::vector<double>& center_values) const;
    Sinogram to_surface() const;

private:
    CenterSet centers_;
    RadiusGrid radii_;
    int n_theta_;
    Normalization norm_;
    std::vector<double> values_;
};

Sinogram forward_sinogram(const ScalarField2D& f, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                          Normalization norm = Normalization::SurfaceIntegral);
/// Analytic evaluation path (no interpolation).
Sinogram forward_sinogram(const Phantom& f, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                          Normalization norm = Normalization::SurfaceIntegral);

/// Dense discretization of R_S on the bilinear nodal basis of `window`.
/// Row index = center * radii.count() + radius.
struct OperatorMatrix
{
    Grid2D window;
    CenterSet centers;
    RadiusGrid radii;
    int n_theta;
    Eigen::MatrixXd matrix;

    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix.cols()); }
    Eigen::VectorXd apply(const ScalarField2D& f) const;
};

inline constexpr std::size_t kDefaultColumnCap = 1200;

OperatorMatrix build_operator_matrix(const Grid2D& window, const CenterSet& S, const RadiusGrid& radii, int n_theta,
                                     std::size_t column_cap = kDefaultColumnCap);

/// Transpose action of the surface-integral operator, matrix-free.
ScalarField2D adjoint_apply(const Sinogram& g, const Grid2D& window);

Eigen::VectorXd flatten(const Sinogram& s);

/// Text header (normalization, centers, radii, n_theta) followed by a CSV matrix.
void write_sinogram(std::ostream& os, const Sinogram& s);
/// Triplet export "row,col,value" of the nonzero entries.
void write_operator_triplets(std::ostream& os, const OperatorMatrix& A);

} // namespace cradon
