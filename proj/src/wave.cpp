#include "cradon/wave.hpp"

#include "cradon/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace cradon {

namespace {

// 5-point Laplacian at interior nodes; boundary nodes get 0.
void laplacian(const Grid2D& g, const std::vector<double>& u, std::vector<double>& out)
{
    const int nx = g.nx(), ny = g.ny();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jb, std::size_t je) {
        for (int j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = g.index(i, j);
                if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) {
                    out[k] = 0.0;
                    continue;
                }
                out[k] = inv_h2 * (u[k - 1] + u[k + 1] + u[k - nx] + u[k + nx] - 4.0 * u[k]);
            }
        }
    });
}

double sample(const Grid2D& g, const std::vector<double>& u, Point2 p)
{
    const BilinearStencil st = bilinear_stencil(g, p);
    double v = 0.0;
    for (int q = 0; q < st.count; ++q)
        v += st.weight[q] * u[st.index[q]];
    return v;
}

double max_abs(const std::vector<double>& u)
{
    double m = 0.0;
    for (double v : u)
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace

WaveState WaveState::initial(const ScalarField2D& f, double dt)
{
    WaveState s{f.grid(), std::vector<double>(f.size(), 0.0), std::vector<double>(f.size()), 0.0, dt};
    for (std::size_t k = 0; k < f.size(); ++k)
        s.u_prev[k] = -dt * f[k];
    return s;
}

std::vector<double> ProbeTrace::probe_series(std::size_t p) const
{
    std::vector<double> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        out[k] = at(k, p);
    return out;
}

double FdtdResult::energy_drift() const
{
    if (!(initial_energy > 0.0))
        return 0.0;
    double d = 0.0;
    for (double e : energy)
        d = std::max(d, std::abs(e - initial_energy) / initial_energy);
    return d;
}

Grid2D wave_domain(const Grid2D& data_grid, double T, std::span<const Point2> probes)
{
    const double h = data_grid.h();
    const double reach = T + 2.0 * h;
    const Point2 lo = data_grid.origin(), hi = data_grid.upper();
    double need = reach;
    for (Point2 p : probes) {
        need = std::max(need, lo.x - p.x + reach);
        need = std::max(need, p.x - hi.x + reach);
        need = std::max(need, lo.y - p.y + reach);
        need = std::max(need, p.y - hi.y + reach);
    }
    const int pad = static_cast<int>(std::ceil(need / h)) + 1;
    return Grid2D({lo.x - pad * h, lo.y - pad * h}, h, data_grid.nx() + 2 * pad, data_grid.ny() + 2 * pad);
}

double total_energy(const WaveState& s)
{
    const Grid2D& g = s.grid;
    const int nx = g.nx(), ny = g.ny();
    const double h = g.h();
    double kinetic = 0.0, potential = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double v = (s.u[k] - s.u_prev[k]) / s.dt;
            kinetic += v * v;
            if (i + 1 < nx)
                potential += (s.u[k + 1] - s.u[k]) * (s.u_prev[k + 1] - s.u_prev[k]);
            if (j + 1 < ny)
                potential += (s.u[k + nx] - s.u[k]) * (s.u_prev[k + nx] - s.u_prev[k]);
        }
    }
    // grad terms carry 1/h^2, cancelled by the h^2 area weight
    return 0.5 * (h * h * kinetic + potential);
}

FdtdResult fdtd_solve(const ScalarField2D& f, double T, std::span<const Point2> probes, const FdtdOptions& opt)
{
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("simulation time T must be positive");
    if (!(opt.cfl > 0.0) || opt.cfl > kDefaultCfl)
        throw std::invalid_argument("CFL number must lie in (0, 0.5]");

    const Grid2D dom = wave_domain(f.grid(), T, probes);
    const double h = dom.h();
    const int pad = static_cast<int>(std::lround((f.grid().origin().x - dom.origin().x) / h));
    for (Point2 p : probes)
        if (!dom.contains(p))
            throw std::out_of_range("probe outside the computational domain");

    std::vector<double> data(dom.size(), 0.0);
    for (int j = 0; j < f.grid().ny(); ++j)
        for (int i = 0; i < f.grid().nx(); ++i)
            data[dom.index(i + pad, j + pad)] = f.at(i, j);

    const double dt = opt.cfl * h / std::sqrt(2.0);
    const int steps = static_cast<int>(std::ceil(T / dt - 1e-9));

    FdtdResult res{ProbeTrace{{probes.begin(), probes.end()}, {}, {}, 0.0, h}, {}, 0.0, WaveState{dom, {}, {}, 0.0, dt}, {}};
    ProbeTrace& tr = res.trace;
    tr.times.reserve(static_cast<std::size_t>(steps) + 1);
    tr.values.reserve((static_cast<std::size_t>(steps) + 1) * probes.size());

    std::vector<double> u_prev(dom.size(), 0.0), u(dom.size()), u_next(dom.size()), lap(dom.size());
    res.initial_energy = 0.0;
    for (double v : data)
        res.initial_energy += 0.5 * h * h * v * v;

    auto record = [&](const std::vector<double>& level, int k) {
        tr.times.push_back(k * dt);
        for (Point2 p : probes)
            tr.values.push_back(sample(dom, level, p));
        tr.field_max = std::max(tr.field_max, max_abs(level));
        if (opt.snapshot_stride > 0 && k % opt.snapshot_stride == 0)
            res.snapshots.emplace_back(dom, level);
    };

    record(u_prev, 0);

    // u^1 = dt f + dt^3/6 Lap f
    laplacian(dom, data, lap);
    for (std::size_t k = 0; k < dom.size(); ++k)
        u[k] = dt * data[k] + dt * dt * dt / 6.0 * lap[k];
    record(u, 1);
    if (opt.record_energy)
        res.energy.push_back(total_energy(WaveState{dom, u, u_prev, dt, dt}));

    const double dt2 = dt * dt;
    for (int n = 1; n < steps; ++n) {
        laplacian(dom, u, lap);
        parallel_for(dom.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k)
                u_next[k] = 2.0 * u[k] - u_prev[k] + dt2 * lap[k];
        });
        // Dirichlet boundary (never reached by the signal)
        for (int i = 0; i < dom.nx(); ++i) {
            u_next[dom.index(i, 0)] = 0.0;
            u_next[dom.index(i, dom.ny() - 1)] = 0.0;
        }
        for (int j = 0; j < dom.ny(); ++j) {
            u_next[dom.index(0, j)] = 0.0;
            u_next[dom.index(dom.nx() - 1, j)] = 0.0;
        }
        std::swap(u_prev, u);
        std::swap(u, u_next);
        record(u, n + 1);
        if (opt.record_energy)
            res.energy.push_back(total_energy(WaveState{dom, u, u_prev, (n + 1) * dt, dt}));
    }
    res.final_state = WaveState{dom, std::move(u), std::move(u_prev), steps * dt, dt};
    return res;
}

double u_from_sinogram(std::span<const double> rf_mean, const RadiusGrid& radii, double t, int dim, double c_norm,
                       int n_quad)
{
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("solution formula implemented for dimensions 2 and 3 only");
    if (rf_mean.size() != static_cast<std::size_t>(radii.count()))
        throw std::invalid_argument("spherical-mean samples do not match the radius grid");
    if (!(t >= 0.0))
        throw std::invalid_argument("time must be nonnegative");
    if (t == 0.0)
        return 0.0;
    if (radii.r_min() > 0.0 || radii.r_max() < t * (1.0 - 1e-12))
        throw std::out_of_range("radius grid does not cover [0, t]");

    const double dr = radii.step();
    auto mean_at = [&](double r) {
        const double x = std::clamp(r / dr, 0.0, static_cast<double>(radii.count() - 1));
        const auto j = std::min(static_cast<int>(x), radii.count() - 2);
        const double a = x - j;
        return (1.0 - a) * rf_mean[static_cast<std::size_t>(j)] + a * rf_mean[static_cast<std::size_t>(j) + 1];
    };

    if (dim == 3)
        return c_norm * t * mean_at(t);

    // int_0^{pi/2} t sin(th) m(t sin(th)) d th, trapezoid; the th = 0 end vanishes
    const double dth = 0.5 * std::numbers::pi / n_quad;
    double sum = 0.0;
    for (int k = 1; k <= n_quad; ++k) {
        const double s = (k == n_quad) ? 1.0 : std::sin(k * dth);
        const double w = (k == n_quad) ? 0.5 : 1.0;
        sum += w * t * s * mean_at(t * s);
    }
    return c_norm * dth * sum;
}

double sphere_mean_3d(const std::function<double(double)>& profile, double offset, double r, int n_intervals)
{
    if (n_intervals < 2 || n_intervals % 2 != 0)
        throw std::invalid_argument("Simpson rule needs an even interval count");
    // mean = 1/2 int_{-1}^{1} g(sqrt(a^2 + r^2 - 2 a r mu)) d mu
    const double hmu = 2.0 / n_intervals;
    double sum = 0.0;
    for (int k = 0; k <= n_intervals; ++k) {
        const double mu = -1.0 + k * hmu;
        const double w = (k == 0 || k == n_intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        sum += w * profile(std::sqrt(std::max(0.0, offset * offset + r * r - 2.0 * offset * r * mu)));
    }
    return 0.5 * sum * hmu / 3.0;
}

double kirchhoff_gaussian(double offset, double width, double t)
{
    const double w2 = width * width;
    if (t == 0.0)
        return 0.0;
    if (offset == 0.0)
        return t * std::exp(-t * t / w2);
    const double mean = w2 / (4.0 * offset * t) * (std::exp(-(offset - t) * (offset - t) / w2) -
                                                   std::exp(-(offset + t) * (offset + t) / w2));
    return t * mean;
}

FormulaTrace formula_vs_fdtd(const CalibrationSetup& setup)
{
    const GaussianBump& g = setup.phantom;
    const Phantom ph(g);
    const Grid2D data = Grid2D::centered(g.center, g.support_radius() + 2.0 * setup.h, setup.h);
    const ScalarField2D f = sample_phantom(ph, data);
    const Point2 probes[] = {setup.probe};
    const FdtdResult res = fdtd_solve(f, setup.T, probes, {kDefaultCfl, 0, false});

    const double t_end = res.trace.times.back();
    const int m = static_cast<int>(std::ceil(t_end / (setup.h / 8.0))) + 1;
    const RadiusGrid radii(0.0, t_end, m);
    const Sinogram means =
        forward_sinogram(ph, CenterSet::points({setup.probe}), radii, setup.n_theta, Normalization::Mean);

    FormulaTrace out;
    out.times = res.trace.times;
    out.fdtd = res.trace.probe_series(0);
    for (double t : out.times)
        out.formula.push_back(u_from_sinogram(means.values(), radii, t, 2, 1.0));
    return out;
}

namespace {

Calibration fit(int dim, const std::vector<double>& model, const std::vector<double>& reference)
{
    double mm = 0.0, mr = 0.0, rr = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        mm += model[k] * model[k];
        mr += model[k] * reference[k];
        rr += reference[k] * reference[k];
    }
    if (!(mm > 0.0) || !(rr > 0.0))
        throw std::runtime_error("calibration traces are identically zero");
    Calibration c;
    c.dim = dim;
    c.c_norm = mr / mm;
    double err = 0.0;
    for (std::size_t k = 0; k < model.size(); ++k) {
        const double d = c.c_norm * model[k] - reference[k];
        err += d * d;
    }
    c.residual = std::sqrt(err / rr);
    return c;
}

} // namespace

Calibration calibrate_formula(int dim, const CalibrationSetup& setup)
{
    Calibration c;
    if (dim == 2) {
        const FormulaTrace tr = formula_vs_fdtd(setup);
        c = fit(2, tr.formula, tr.fdtd);
    } else if (dim == 3) {
        const GaussianBump& g = setup.phantom;
        const double offset = distance(setup.probe, g.center);
        const int m = 2049;
        const RadiusGrid radii(0.0, setup.T, m);
        std::vector<double> means(static_cast<std::size_t>(m));
        const auto profile = [w2 = g.width * g.width](double rho) { return std::exp(-rho * rho / w2); };
        for (int j = 0; j < m; ++j)
            means[static_cast<std::size_t>(j)] = sphere_mean_3d(profile, offset, radii.at(j));
        std::vector<double> model, reference;
        for (int k = 0; k <= 400; ++k) {
            const double t = setup.T * k / 400.0;
            model.push_back(u_from_sinogram(means, radii, t, 3, 1.0));
            reference.push_back(kirchhoff_gaussian(offset, g.width, t));
        }
        c = fit(3, model, reference);
    } else {
        throw std::invalid_argument("calibration implemented for dimensions 2 and 3 only");
    }
    if (c.residual > kCalibrationFaultResidual)
        throw std::runtime_error("formula calibration residual " + std::to_string(c.residual) +
                                 " exceeds 10%: implementation fault");
    return c;
}

FiniteSpeedReport check_finite_speed(const ProbeTrace& trace, const ScalarField2D& f, double eps, double tau)
{
    FiniteSpeedReport rep;
    const double margin = eps < 0.0 ? 2.0 * f.grid().h() : eps;
    const double fmax = f.max_abs();
    if (!(fmax > 0.0) || !(trace.field_max > 0.0)) {
        rep.zero_field = true;
        for (Point2 p : trace.probes)
            rep.probes.push_back({p, std::numeric_limits<double>::infinity()});
        return rep;
    }
    std::vector<Point2> support;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (std::abs(f[k]) >= tau * fmax)
            support.push_back(f.grid().node(k));

    const double level = kArrivalLevel * trace.field_max;
    for (std::size_t p = 0; p < trace.probes.size(); ++p) {
        ProbeArrival a;
        a.probe = trace.probes[p];
        a.distance = std::numeric_limits<double>::infinity();
        for (Point2 q : support)
            a.distance = std::min(a.distance, distance(a.probe, q));
        for (std::size_t k = 0; k < trace.times.size(); ++k)
            if (std::abs(trace.at(k, p)) > level) {
                a.arrival = trace.times[k];
                break;
            }
        a.early = a.arrival < a.distance - margin;
        // dual: quiet until `arrival` means f is negligible in the ball it probes
        const double quiet = std::min(a.arrival, trace.times.back()) - margin;
        for (std::size_t k = 0; k < f.size(); ++k)
            if (distance(f.grid().node(k), a.probe) < quiet)
                a.max_f_in_ball = std::max(a.max_f_in_ball, std::abs(f[k]) / fmax);
        if (a.early)
            ++rep.violations;
        rep.probes.push_back(a);
    }
    return rep;
}

NodalResult nodal_residual(const ScalarField2D& f, const CenterSet& S, double T)
{
    std::vector<Point2> probes;
    for (const auto& c : S.samples())
        if (f.grid().contains(c.pos))
            probes.push_back(c.pos);
    NodalResult out;
    out.probes = probes.size();
    if (!(f.max_abs() > 0.0)) {
        out.zero_field = true;
        return out;
    }
    const FdtdResult res = fdtd_solve(f, T, probes, {kDefaultCfl, 0, false});
    double m = 0.0;
    for (double v : res.trace.values)
        m = std::max(m, std::abs(v));
    out.residual = res.trace.field_max > 0.0 ? m / res.trace.field_max : 0.0;
    return out;
}

void write_trace_csv(std::ostream& os, const ProbeTrace& trace)
{
    os << std::setprecision(17) << "t";
    for (std::size_t p = 0; p < trace.probes.size(); ++p)
        os << ",p" << (p + 1);
    os << "\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        os << trace.times[k];
        for (std::size_t p = 0; p < trace.probes.size(); ++p)
            os << "," << trace.at(k, p);
        os << "\n";
    }
}

} // namespace cradon
