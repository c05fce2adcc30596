#pragma once

#include "cradon/field.hpp"
#include "cradon/grid.hpp"

#include <string>
#include <variant>
#include <vector>

namespace cradon {

/// A exp(-|x-c|^2 / width^2), cut off beyond 6 widths (tail < 3e-16 A).
struct GaussianBump
{
    Point2 center;
    double width = 0.1;
    double amplitude = 1.0;

    double operator()(Point2 p) const;
    double support_radius() const { return 6.0 * width; }
};

/// Disk indicator of radius `radius` with a C-infinity edge of thickness `edge`.
struct SmoothDisk
{
    Point2 center;
    double radius = 0.5;
    double edge = 0.1;
    double amplitude = 1.0;

    double operator()(Point2 p) const;
    double support_radius() const { return radius + edge; }
};

/// A (1 - |x-c|^2/R^2)^4 inside |x-c| < R, zero outside (C^3).
struct PolyBump
{
    Point2 center;
    double radius = 0.2;
    double amplitude = 1.0;

    double operator()(Point2 p) const;
};

struct BumpSum
{
    std::vector<PolyBump> bumps;
    double operator()(Point2 p) const;
};

/// Alternating orbit sum of a gaussian under the dihedral reflection group
/// of the line system L_k = {t e^{i pi k / N}}, moved by a rigid motion.
class CoxeterOdd
{
public:
    CoxeterOdd(const GaussianBump& base, int lines, const RigidMotion2D& motion);

    double operator()(Point2 p) const;

    const GaussianBump& base() const { return base_; }
    int lines() const { return lines_; }
    const RigidMotion2D& motion() const { return motion_; }

    struct Term
    {
        Point2 center;
        double sign;
    };
    const std::vector<Term>& orbit() const { return orbit_; }

    /// Line k of the moved system.
    Line2D line(int k) const;

private:
    GaussianBump base_;
    int lines_;
    RigidMotion2D motion_;
    std::vector<Term> orbit_;
};

/// Analytic test function. All variants are evaluable at arbitrary points and
/// vanish outside their bounding disk.
class Phantom
{
public:
    using Variant = std::variant<GaussianBump, SmoothDisk, BumpSum, CoxeterOdd>;

    Phantom(Variant v); // NOLINT(google-explicit-constructor)

    double operator()(Point2 p) const;

    Point2 bounding_center() const;
    double bounding_radius() const;
    std::string kind() const;
    const Variant& variant() const { return v_; }

    Phantom scaled(double s) const;

private:
    Variant v_;
};

/// Pointwise analytic evaluation at grid nodes. Throws when the phantom's
/// bounding disk is not contained in the grid rectangle.
ScalarField2D sample_phantom(const Phantom& p, const Grid2D& g);

/// Coxeter-odd witness sampled on a grid; throws if the base bump touches a
/// line of the system.
ScalarField2D make_coxeter_odd(const GaussianBump& base, int lines, const RigidMotion2D& motion, const Grid2D& g);

} // namespace cradon
