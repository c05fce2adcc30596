#pragma once

#include "cradon/grid.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cradon {

/// Real samples on a Grid2D. The field is identically zero outside the grid
/// rectangle; inside it is reconstructed by bilinear interpolation.
class ScalarField2D
{
public:
    explicit ScalarField2D(const Grid2D& grid); // zero field
    ScalarField2D(const Grid2D& grid, std::vector<double> values);
    ScalarField2D(const Grid2D& grid, const std::function<double(Point2)>& fn);

    const Grid2D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }

    /// Bilinear interpolation; zero outside the grid rectangle.
    double sample(Point2 p) const;
    double operator()(Point2 p) const { return sample(p); }

    double max_abs() const;
    /// Discrete L2 norm sqrt(sum v^2) (no h^2 weight).
    double l2() const;

    ScalarField2D scaled(double s) const;
    friend ScalarField2D operator+(const ScalarField2D& a, const ScalarField2D& b);
    friend ScalarField2D operator-(const ScalarField2D& a, const ScalarField2D& b);

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// f o rho_L resampled on f's grid (bilinear).
ScalarField2D reflect_field(const ScalarField2D& f, const Line2D& line);
/// (f + f o rho_L) / 2
ScalarField2D even_part(const ScalarField2D& f, const Line2D& line);
/// (f - f o rho_L) / 2
ScalarField2D odd_part(const ScalarField2D& f, const Line2D& line);

/// Text header (nx, ny, origin, h) followed by one CSV row per grid row.
void write_field(std::ostream& os, const ScalarField2D& f);
ScalarField2D read_field(std::istream& is);

/// Plain PGM (P2), linear min-max scaling to 0..255. `rows`/`cols` give the
/// image layout of `values` (row 0 printed first).
void write_pgm(std::ostream& os, std::span<const double> values, int rows, int cols);
/// Field as PGM with +y pointing up.
void write_field_pgm(std::ostream& os, const ScalarField2D& f);

} // namespace cradon
