#include "cradon/diagnostics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cradon {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::InjectiveAtScale:
        return "INJECTIVE-AT-SCALE";
    case Verdict::NonInjectiveAtScale:
        return "NON-INJECTIVE-AT-SCALE";
    case Verdict::Indeterminate:
        break;
    }
    return "INDETERMINATE";
}

const char* to_string(TangentVerdict v)
{
    return v == TangentVerdict::Consistent ? "CONSISTENT" : "NECESSARY-CONDITION-VIOLATED";
}

SpectrumReport singular_spectrum(const Eigen::MatrixXd& A, double threshold, std::size_t column_cap)
{
    if (static_cast<std::size_t>(A.cols()) > column_cap)
        throw std::length_error("matrix has " + std::to_string(A.cols()) + " columns; raise the column cap to at least " +
                                std::to_string(A.cols()));
    if (A.size() == 0)
        throw std::invalid_argument("empty matrix");
    SpectrumReport rep;
    rep.threshold = threshold;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    const Eigen::VectorXd& s = svd.singularValues();
    rep.singular_values.assign(s.data(), s.data() + s.size());
    // rank-deficient shapes (more columns than rows) contribute exact zeros
    rep.singular_values.resize(static_cast<std::size_t>(A.cols()), 0.0);
    std::sort(rep.singular_values.begin(), rep.singular_values.end(), std::greater<>());

    const double smax = rep.singular_values.front();
    const auto n = static_cast<int>(rep.singular_values.size());
    if (!(smax > 0.0)) {
        rep.near_kernel = n;
        rep.condition = 0.0;
        rep.gap = 0.0;
        rep.verdict = Verdict::NonInjectiveAtScale;
        return rep;
    }
    rep.near_kernel = static_cast<int>(std::count_if(rep.singular_values.begin(), rep.singular_values.end(),
                                                     [&](double x) { return x < threshold * smax; }));
    rep.condition = rep.singular_values.back() / smax;
    const int kept = n - rep.near_kernel;
    const double smallest_kept = rep.singular_values[static_cast<std::size_t>(kept - 1)];
    if (rep.near_kernel == 0) {
        rep.gap = smallest_kept / (threshold * smax);
    } else {
        const double largest_null = rep.singular_values[static_cast<std::size_t>(kept)];
        rep.gap = largest_null > 0.0 ? smallest_kept / largest_null : std::numeric_limits<double>::infinity();
    }
    if (rep.gap < kRequiredSpectralGap)
        rep.verdict = Verdict::Indeterminate;
    else
        rep.verdict = rep.near_kernel == 0 ? Verdict::InjectiveAtScale : Verdict::NonInjectiveAtScale;
    return rep;
}

SpectrumReport singular_spectrum(const OperatorMatrix& A, double threshold)
{
    SpectrumReport rep = singular_spectrum(A.matrix, threshold);
    rep.description = A.centers.describe() + " | window " + std::to_string(A.window.nx()) + "x" +
                      std::to_string(A.window.ny()) + " h=" + std::to_string(A.window.h()) + " | radii " +
                      std::to_string(A.radii.count()) + " in [" + std::to_string(A.radii.r_min()) + ", " +
                      std::to_string(A.radii.r_max()) + "] | n_theta " + std::to_string(A.n_theta);
    return rep;
}

Eigen::MatrixXd near_kernel_basis(const Eigen::MatrixXd& A, double threshold)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::Index n = A.cols();
    const double smax = s.size() ? s(0) : 0.0;
    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) >= threshold * smax && smax > 0.0)
        ++keep;
    return svd.matrixV().rightCols(n - keep);
}

std::optional<int> odd_subspace_dimension(const Grid2D& window, int lines, const RigidMotion2D& motion)
{
    if (lines < 1)
        throw std::invalid_argument("line system needs at least one line");
    const double tol = 1e-9 * window.h();
    // Fixed nodes of q -> g(q), or nullopt if g does not permute the nodes.
    auto fixed_count = [&](const auto& g) -> std::optional<int> {
        int fixed = 0;
        for (std::size_t k = 0; k < window.size(); ++k) {
            const Point2 q = window.node(k);
            const Point2 gq = g(q);
            const std::size_t m = window.nearest_index(gq);
            if (distance(window.node(m), gq) > tol)
                return std::nullopt;
            fixed += m == k;
        }
        return fixed;
    };
    const double pi = std::acos(-1.0);
    long long total = 0;
    for (int k = 0; k < lines; ++k) {
        const RigidMotion2D rot = motion.compose(RigidMotion2D{2.0 * pi * k / lines, {}}).compose(motion.inverse());
        const auto r = fixed_count([&](Point2 q) { return rot.apply(q); });
        const Line2D mirror = Line2D::through(motion.translation, motion.angle + pi * k / lines);
        const auto s = fixed_count([&](Point2 q) { return mirror.reflect(q); });
        if (!r || !s)
            return std::nullopt;
        total += *r - *s;
    }
    if (total % (2 * lines) != 0)
        throw std::logic_error("character sum not divisible by the group order");
    return static_cast<int>(total / (2 * lines));
}

SpectrumReport injectivity_verdict(const CenterSet& S, const Grid2D& window, const RadiusGrid& radii, int n_theta,
                                   double threshold)
{
    return singular_spectrum(build_operator_matrix(window, S, radii, n_theta), threshold);
}

Reconstruction reconstruct_cg(const Sinogram& g, const OperatorMatrix& A, int max_iter, double tol)
{
    if (g.normalization() != Normalization::SurfaceIntegral)
        throw std::invalid_argument("reconstruction expects surface-integral data");
    if (g.rows() * g.cols() != A.rows())
        throw std::invalid_argument("sinogram size " + std::to_string(g.rows() * g.cols()) +
                                    " does not match operator rows " + std::to_string(A.rows()));
    return reconstruct_cg(flatten(g), A, max_iter, tol);
}

Reconstruction reconstruct_cg(const Eigen::VectorXd& g, const OperatorMatrix& A, int max_iter, double tol)
{
    if (static_cast<std::size_t>(g.size()) != A.rows())
        throw std::invalid_argument("data size " + std::to_string(g.size()) + " does not match operator rows " +
                                    std::to_string(A.rows()));
    const Eigen::MatrixXd& M = A.matrix;
    const Eigen::Index n = M.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    ReconstructionReport rep;

    Eigen::VectorXd r = M.transpose() * g; // normal-equation residual at x = 0
    const double r0 = r.norm();
    rep.residual_history.push_back(r0);
    if (r0 == 0.0) {
        rep.converged = true;
        return {ScalarField2D(A.window), rep};
    }
    Eigen::VectorXd Mr = M.transpose() * (M * r);
    Eigen::VectorXd p = r;
    Eigen::VectorXd Mp = Mr;
    double rMr = r.dot(Mr);
    for (int it = 0; it < max_iter; ++it) {
        const double MpMp = Mp.squaredNorm();
        if (!(MpMp > 0.0) || !(rMr > 0.0))
            break;
        const double alpha = rMr / MpMp;
        x += alpha * p;
        r -= alpha * Mp;
        rep.iterations = it + 1;
        rep.residual_history.push_back(r.norm());
        if (r.norm() <= tol * r0) {
            rep.converged = true;
            break;
        }
        Mr = M.transpose() * (M * r);
        const double rMr_new = r.dot(Mr);
        const double beta = rMr_new / rMr;
        rMr = rMr_new;
        p = r + beta * p;
        Mp = Mr + beta * Mp;
    }
    std::vector<double> values(x.data(), x.data() + x.size());
    return {ScalarField2D(A.window, std::move(values)), rep};
}

TangentReport tangent_criterion(const CenterSet& S, const ScalarField2D& f, double tau, double strict_tol)
{
    TangentReport rep;
    rep.hull = hull_of_support(f, tau);
    const double tol = strict_tol < 0.0 ? f.grid().h() : strict_tol;
    rep.max_clearance = -std::numeric_limits<double>::infinity();
    for (const CenterSample& c : S.samples()) {
        TangentLine t{};
        try {
            t = tangent_at(S, c.s);
        } catch (const std::domain_error&) {
            ++rep.skipped;
            continue;
        }
        ++rep.tested;
        const HullIntersection hit = line_intersects_hull(t, rep.hull);
        if (hit.clearance > rep.max_clearance) {
            rep.max_clearance = hit.clearance;
            rep.worst_s = c.s;
        }
        if (hit.clearance > tol)
            ++rep.missing;
    }
    rep.verdict = rep.missing > 0 ? TangentVerdict::NecessaryConditionViolated : TangentVerdict::Consistent;
    return rep;
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& r)
{
    os << std::setprecision(17) << "index,sigma\n";
    for (std::size_t k = 0; k < r.singular_values.size(); ++k)
        os << k << "," << r.singular_values[k] << "\n";
}

void write_residual_csv(std::ostream& os, const ReconstructionReport& r)
{
    os << std::setprecision(17) << "iteration,residual\n";
    for (std::size_t k = 0; k < r.residual_history.size(); ++k)
        os << k << "," << r.residual_history[k] << "\n";
}

} // namespace cradon
