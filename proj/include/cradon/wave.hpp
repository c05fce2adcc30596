#pragma once

#include "cradon/field.hpp"
#include "cradon/geometry.hpp"
#include "cradon/phantom.hpp"
#include "cradon/radon.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace cradon {

/// Leapfrog pair on the computational grid: u at time t, u_prev at t - dt.
struct WaveState
{
    Grid2D grid;
    std::vector<double> u;
    std::vector<double> u_prev;
    double t = 0.0;
    double dt = 0.0;

    /// u = 0, u_t = f at t = 0 (u_prev = -dt f so the midpoint velocity is f).
    static WaveState initial(const ScalarField2D& f, double dt);
};

/// u(p_i, t_k) on a uniform time grid; values stored time-major.
struct ProbeTrace
{
    std::vector<Point2> probes;
    std::vector<double> times;
    std::vector<double> values;
    /// max |u| over the whole computational grid and all time levels
    double field_max = 0.0;
    double h = 0.0;

    double at(std::size_t k, std::size_t p) const { return values[k * probes.size() + p]; }
    std::vector<double> probe_series(std::size_t p) const;
};

inline constexpr double kDefaultCfl = 0.5;

struct FdtdOptions
{
    double cfl = kDefaultCfl;
    int snapshot_stride = 0; // 0: no snapshots
    bool record_energy = true;
};

struct FdtdResult
{
    ProbeTrace trace;
    /// Discrete energy after each step (index k: pair (u^{k+1}, u^k)).
    std::vector<double> energy;
    double initial_energy = 0.0;
    WaveState final_state;
    std::vector<ScalarField2D> snapshots;

    /// max_k |E_k - E_0| / E_0 (0 for zero data)
    double energy_drift() const;
};

/// Computational grid: the data grid padded symmetrically so every node of
/// the data grid and every probe is farther than T + 2h from the boundary.
Grid2D wave_domain(const Grid2D& data_grid, double T, std::span<const Point2> probes);

/// Free-space u_tt = Laplacian u with u(0) = 0, u_t(0) = f; second-order
/// leapfrog, 5-point Laplacian, third-order Taylor start.
FdtdResult fdtd_solve(const ScalarField2D& f, double T, std::span<const Point2> probes, const FdtdOptions& opt = {});

/// 1/2 h^2 sum( ((u - u_prev)/dt)^2 + grad u . grad u_prev ), the quantity
/// leapfrog conserves exactly.
double total_energy(const WaveState& state);

/// Solution formula in terms of spherical means m(r) sampled on `radii`:
/// dim 2: c * int_0^t r m(r) / sqrt(t^2 - r^2) dr  (r = t sin(theta));
/// dim 3: c * t m(t).
double u_from_sinogram(std::span<const double> rf_mean, const RadiusGrid& radii, double t, int dim, double c_norm,
                       int n_quad = 512);

/// Mean over the sphere |y - x| = r in R^3 of a radial profile g(|y - c|)
/// with |x - c| = offset (composite Simpson over the polar angle).
double sphere_mean_3d(const std::function<double(double)>& profile, double offset, double r, int n_intervals = 512);

/// Closed-form Kirchhoff solution at distance `offset` from the center of a
/// 3D gaussian exp(-|y-c|^2 / width^2) (amplitude 1).
double kirchhoff_gaussian(double offset, double width, double t);

struct CalibrationSetup
{
    GaussianBump phantom{{0.0, 0.0}, 0.25, 1.0};
    Point2 probe{0.0, 0.0};
    double h = 0.25 / 8.0;
    double T = 1.5;
    int n_theta = 256;
};

struct Calibration
{
    int dim = 2;
    double c_norm = 1.0;
    double residual = 0.0; // relative L2 fit residual
};

inline constexpr double kCalibrationFaultResidual = 0.10;

/// Least-squares constant between the formula and an independent solution
/// (FDTD in 2D, Kirchhoff in 3D). Throws when the residual exceeds 10%.
Calibration calibrate_formula(int dim, const CalibrationSetup& setup = {});

struct FormulaTrace
{
    std::vector<double> times;
    std::vector<double> fdtd;
    std::vector<double> formula; // with c_norm = 1
};

/// 2D formula vs FDTD at one probe for a gaussian phantom.
FormulaTrace formula_vs_fdtd(const CalibrationSetup& setup);

inline constexpr double kArrivalLevel = 1e-4;

struct ProbeArrival
{
    Point2 probe;
    double distance = 0.0; // Euclidean distance to supp f
    double arrival = std::numeric_limits<double>::infinity();
    bool early = false;         // arrival before distance - eps
    double max_f_in_ball = 0.0; // max |f| / max|f| on |x - p| < arrival - eps
};

struct FiniteSpeedReport
{
    std::vector<ProbeArrival> probes;
    std::size_t violations = 0;
    bool zero_field = false;
};

/// First-arrival times (|u| > 1e-4 max|u|) against distances to supp f.
/// `eps` is the allowed lag margin (negative: 2h).
FiniteSpeedReport check_finite_speed(const ProbeTrace& trace, const ScalarField2D& f, double eps = -1.0,
                                     double tau = 1e-8);

struct NodalResult
{
    double residual = 0.0; // max_{S, t} |u| / max |u|
    bool zero_field = false;
    std::size_t probes = 0;
};

/// Probes on the samples of S inside the data grid.
NodalResult nodal_residual(const ScalarField2D& f, const CenterSet& S, double T);

/// CSV "t,p1,...,pk".
void write_trace_csv(std::ostream& os, const ProbeTrace& trace);

} // namespace cradon
