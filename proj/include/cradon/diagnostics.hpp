#pragma once

#include "cradon/field.hpp"
#include "cradon/geometry.hpp"
#include "cradon/radon.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cradon {

enum class Verdict { InjectiveAtScale, NonInjectiveAtScale, Indeterminate };

const char* to_string(Verdict v);

inline constexpr double kNearKernelThreshold = 1e-6;
inline constexpr double kRequiredSpectralGap = 1e3;

struct SpectrumReport
{
    std::vector<double> singular_values; // descending
    double threshold = kNearKernelThreshold;
    int near_kernel = 0;
    /// sigma_min / sigma_max
    double condition = 0.0;
    /// Ratio between the smallest singular value kept and the largest one in
    /// the near-kernel cluster. With an empty cluster the threshold itself
    /// (threshold * sigma_max) plays the role of the cluster edge.
    double gap = 0.0;
    Verdict verdict = Verdict::Indeterminate;
    std::string description;
};

/// Full SVD of a dense matrix and near-kernel bookkeeping.
SpectrumReport singular_spectrum(const Eigen::MatrixXd& A, double threshold = kNearKernelThreshold,
                                 std::size_t column_cap = kDefaultColumnCap);
SpectrumReport singular_spectrum(const OperatorMatrix& A, double threshold = kNearKernelThreshold);

/// Right singular vectors spanning the near-kernel (columns).
Eigen::MatrixXd near_kernel_basis(const Eigen::MatrixXd& A, double threshold = kNearKernelThreshold);

SpectrumReport injectivity_verdict(const CenterSet& S, const Grid2D& window, const RadiusGrid& radii, int n_theta,
                                   double threshold = kNearKernelThreshold);

/// Dimension of the sign-character isotypic subspace of the nodal basis
/// under the dihedral group of an N-line system: (1/2N) sum_g sign(g) fix(g),
/// with sign -1 on reflections. nullopt when some group element does not map
/// the window nodes onto window nodes.
std::optional<int> odd_subspace_dimension(const Grid2D& window, int lines, const RigidMotion2D& motion = {});

struct ReconstructionReport
{
    int iterations = 0;
    /// ||A^T (A x_k - g)|| for k = 0..iterations
    std::vector<double> residual_history;
    bool converged = false;
    double relative_error = -1.0;      // vs ground truth, when supplied
    double relative_error_even = -1.0; // vs even part, when supplied
};

struct Reconstruction
{
    ScalarField2D field;
    ReconstructionReport report;
};

/// Minimum-norm least squares from a zero start on A^T A x = A^T g. Uses the
/// conjugate-residual recurrence, which minimizes ||A^T(Ax - g)|| over the
/// same Krylov space that plain CG searches, so the reported residual never
/// increases.
Reconstruction reconstruct_cg(const Sinogram& g, const OperatorMatrix& A, int max_iter = 2000, double tol = 1e-10);
Reconstruction reconstruct_cg(const Eigen::VectorXd& g, const OperatorMatrix& A, int max_iter = 2000, double tol = 1e-10);

enum class TangentVerdict { Consistent, NecessaryConditionViolated };

const char* to_string(TangentVerdict v);

struct TangentReport
{
    TangentVerdict verdict = TangentVerdict::Consistent;
    std::size_t tested = 0;
    std::size_t skipped = 0; // singular sample points
    std::size_t missing = 0; // tangents strictly missing the hull
    double max_clearance = 0.0;
    double worst_s = 0.0;
    ConvexHull2D hull;
};

/// Tangent-plane necessary condition: every tangent to S must meet the convex
/// hull of supp f. `strict_tol` is the clearance needed to call a miss strict
/// (negative: one grid spacing of f).
TangentReport tangent_criterion(const CenterSet& S, const ScalarField2D& f, double tau = 1e-8, double strict_tol = -1.0);

void write_spectrum_csv(std::ostream& os, const SpectrumReport& r);
void write_residual_csv(std::ostream& os, const ReconstructionReport& r);

} // namespace cradon
