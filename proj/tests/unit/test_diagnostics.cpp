#include "cradon/diagnostics.hpp"
#include "cradon/scenarios.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace cradon;

namespace {

constexpr double kPi = std::numbers::pi;

Grid2D unit_window(int n) { return Grid2D::centered_nodes({0.0, 0.0}, n, 1.0 / (n - 1)); }

// Node permutation matrix of a point map that sends nodes to nodes.
Eigen::MatrixXd node_permutation(const Grid2D& g, const auto& map)
{
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point2 q = map(g.node(k));
        const std::size_t m = g.nearest_index(q);
        REQUIRE(distance(g.node(m), q) <= 1e-9 * g.h());
        P(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = 1.0;
    }
    return P;
}

// (1/2N) sum_g sign(g) Pi_g over the dihedral group of N lines through the origin.
Eigen::MatrixXd antisymmetrizer(const Grid2D& g, int lines)
{
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < lines; ++k) {
        const RigidMotion2D rot{2.0 * kPi * k / lines, {}};
        const Line2D mirror = Line2D::through({0.0, 0.0}, kPi * k / lines);
        P += node_permutation(g, [&](Point2 q) { return rot.apply(q); });
        P -= node_permutation(g, [&](Point2 q) { return mirror.reflect(q); });
    }
    return P / (2.0 * lines);
}

int numeric_rank(const Eigen::MatrixXd& M)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
}

bool descending(const std::vector<double>& s)
{
    return std::is_sorted(s.begin(), s.end(), std::greater<>());
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("one-by-one matrix: single singular value, injective")
{
    Eigen::MatrixXd A(1, 1);
    A << 2.5;
    const SpectrumReport rep = singular_spectrum(A);
    REQUIRE(rep.singular_values.size() == 1);
    CHECK(rep.singular_values[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(rep.near_kernel == 0);
    CHECK(rep.condition == doctest::Approx(1.0));
    CHECK(rep.gap == doctest::Approx(1.0 / kNearKernelThreshold));
    CHECK(rep.verdict == Verdict::InjectiveAtScale);
}

TEST_CASE("duplicated column with opposite sign yields a near-kernel direction")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd A(12, 4);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            A(i, j) = nd(rng);
    A.col(3) = -A.col(0);
    const SpectrumReport rep = singular_spectrum(A);
    CHECK(rep.singular_values.back() <= 1e-12 * rep.singular_values.front());
    CHECK(rep.near_kernel == 1);
    CHECK(rep.verdict == Verdict::NonInjectiveAtScale);

    const Eigen::MatrixXd V = near_kernel_basis(A);
    REQUIRE(V.cols() == 1);
    CHECK((A * V).norm() <= 1e-12 * A.norm());
    CHECK(std::abs(V(0, 0) - V(3, 0)) <= 1e-12);
    CHECK(std::abs(V(1, 0)) <= 1e-12);
}

TEST_CASE("zero matrix: every direction is in the kernel")
{
    const SpectrumReport rep = singular_spectrum(Eigen::MatrixXd::Zero(3, 2));
    CHECK(rep.near_kernel == 2);
    CHECK(rep.verdict == Verdict::NonInjectiveAtScale);
}

TEST_CASE("wide matrix pads exact zeros to one value per column")
{
    Eigen::MatrixXd A(2, 5);
    A << 1, 0, 0, 0, 0, 0, 3, 0, 0, 0;
    const SpectrumReport rep = singular_spectrum(A);
    REQUIRE(rep.singular_values.size() == 5);
    CHECK(rep.singular_values[0] == doctest::Approx(3.0));
    CHECK(rep.singular_values[1] == doctest::Approx(1.0));
    CHECK(rep.near_kernel == 3);
}

TEST_CASE("singular values match eigenvalues of the Gram matrix on random input")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd A(50, 30);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            A(i, j) = nd(rng);
    const SpectrumReport rep = singular_spectrum(A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A.transpose() * A);
    std::vector<double> oracle(eig.eigenvalues().data(), eig.eigenvalues().data() + 30);
    std::sort(oracle.begin(), oracle.end(), std::greater<>());
    REQUIRE(rep.singular_values.size() == 30);
    CHECK(descending(rep.singular_values));
    for (std::size_t k = 0; k < 30; ++k)
        CHECK(rep.singular_values[k] == doctest::Approx(std::sqrt(oracle[k])).epsilon(1e-8));
}

TEST_CASE("operator spectrum agrees with the Gram eigenvalues relative to sigma_max")
{
    const OperatorMatrix A =
        build_operator_matrix(unit_window(14), CenterSet::circle({0.0, 0.0}, 1.0, 32), RadiusGrid(0.0, 2.0, 40), 128);
    const SpectrumReport rep = singular_spectrum(A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A.matrix.transpose() * A.matrix);
    std::vector<double> oracle(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    std::sort(oracle.begin(), oracle.end(), std::greater<>());
    const double smax2 = rep.singular_values.front() * rep.singular_values.front();
    double worst = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k)
        worst = std::max(worst, std::abs(rep.singular_values[k] * rep.singular_values[k] - oracle[k]) / smax2);
    CHECK(worst <= 1e-10);
    CHECK(rep.description.find("n_theta 128") != std::string::npos);
}

TEST_CASE("character count equals the rank of the explicit antisymmetrizer")
{
    for (int n : {6, 7, 10, 11}) {
        const Grid2D g = unit_window(n);
        for (int lines : {1, 2, 4}) {
            CAPTURE(n);
            CAPTURE(lines);
            const auto dim = odd_subspace_dimension(g, lines);
            REQUIRE(dim.has_value());
            const Eigen::MatrixXd P = antisymmetrizer(g, lines);
            CHECK(*dim == numeric_rank(P));
            CHECK(std::abs(P.trace() - *dim) <= 1e-9);
            CHECK((P * P - P).norm() <= 1e-12);
        }
    }
}

TEST_CASE("character count on even windows has a closed form")
{
    for (int n : {4, 8, 12, 20}) {
        CAPTURE(n);
        const Grid2D g = unit_window(n);
        CHECK(odd_subspace_dimension(g, 1) == n * n / 2);
        CHECK(odd_subspace_dimension(g, 2) == n * n / 4);
        CHECK(odd_subspace_dimension(g, 4) == n * (n - 2) / 8);
    }
}

TEST_CASE("character count is nullopt when the group does not preserve the nodes")
{
    const Grid2D g = unit_window(8);
    CHECK_FALSE(odd_subspace_dimension(g, 3).has_value());
    CHECK_FALSE(odd_subspace_dimension(g, 1, RigidMotion2D{0.0, {0.0, 0.013}}).has_value());
    CHECK_THROWS_AS(odd_subspace_dimension(g, 0), std::invalid_argument);
}

TEST_CASE("full circle of centers: empty near-kernel with a wide gap")
{
    const Grid2D window = unit_window(12);
    const SpectrumReport rep =
        injectivity_verdict(CenterSet::circle({0.0, 0.0}, 1.0, 48), window, RadiusGrid(0.0, 2.0, 60), 256);
    CHECK(rep.near_kernel == 0);
    CHECK(rep.gap >= kRequiredSpectralGap);
    CHECK(rep.verdict == Verdict::InjectiveAtScale);
}

TEST_CASE("line systems: near-kernel count equals the sign-isotypic dimension")
{
    const Grid2D window = unit_window(12);
    for (int lines : {1, 2, 4}) {
        CAPTURE(lines);
        const CenterSet S = CenterSet::coxeter_cross(lines, {}, 3.0, 0.05);
        const OperatorMatrix A = build_operator_matrix(window, S, RadiusGrid(0.0, 3.0, 80), 256);
        const SpectrumReport rep = singular_spectrum(A);
        const auto expected = odd_subspace_dimension(window, lines);
        REQUIRE(expected.has_value());
        CHECK(rep.near_kernel == *expected);
        CHECK(rep.gap >= kRequiredSpectralGap);
        CHECK(rep.verdict == Verdict::NonInjectiveAtScale);

        // the near-kernel lies in the odd subspace
        const Eigen::MatrixXd V = near_kernel_basis(A.matrix);
        const Eigen::MatrixXd P = antisymmetrizer(window, lines);
        REQUIRE(V.cols() == *expected);
        CHECK((P * V - V).norm() <= 1e-4 * V.norm());
    }
}

TEST_CASE("line data reflects to the even part and reflection flips near-kernel vectors")
{
    const Grid2D window = unit_window(12);
    const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, 0.05);
    const OperatorMatrix A = build_operator_matrix(window, S, RadiusGrid(0.0, 3.0, 80), 256);
    const Eigen::MatrixXd V = near_kernel_basis(A.matrix);
    const Eigen::MatrixXd R = node_permutation(window, [](Point2 q) { return Point2{q.x, -q.y}; });
    REQUIRE(V.cols() > 0);
    for (Eigen::Index j = 0; j < V.cols(); ++j)
        CHECK((V.col(j) + R * V.col(j)).norm() <= 1e-4 * V.col(j).norm());
}

TEST_CASE("verdicts are stable when center and radius steps are halved")
{
    const Grid2D window = unit_window(10);
    struct Case
    {
        const char* name;
        int lines; // 0: circle
    };
    for (const Case& c : {Case{"circle", 0}, Case{"line", 1}, Case{"Sigma_2", 2}, Case{"Sigma_4", 4}}) {
        CAPTURE(c.name);
        auto centers = [&](double ds) {
            return c.lines == 0 ? CenterSet::circle({0.0, 0.0}, 1.0, static_cast<int>(std::lround(2 * kPi / ds)))
                                : CenterSet::coxeter_cross(c.lines, {}, 3.0, ds);
        };
        const SpectrumReport coarse = injectivity_verdict(centers(0.1), window, RadiusGrid(0.0, 3.0, 40), 256);
        const SpectrumReport fine = injectivity_verdict(centers(0.05), window, RadiusGrid(0.0, 3.0, 80), 256);
        CHECK(coarse.verdict == fine.verdict);
        CHECK(coarse.near_kernel == fine.near_kernel);
        CHECK(coarse.verdict != Verdict::Indeterminate);
    }
}

TEST_CASE("reconstruction from full-circle data recovers the field")
{
    const Grid2D window = unit_window(12);
    const OperatorMatrix A =
        build_operator_matrix(window, CenterSet::circle({0.0, 0.0}, 1.0, 48), RadiusGrid(0.0, 2.0, 60), 256);
    const ScalarField2D f(window, [](Point2 p) {
        const Point2 a = p - Point2{0.1, -0.05};
        return std::exp(-dot(a, a) / 0.05) + 0.2 * p.y;
    });
    const Reconstruction rec = reconstruct_cg(A.apply(f), A, 500, 1e-12);
    CHECK((rec.field - f).l2() / f.l2() <= 1e-3);
    CHECK(rec.report.iterations <= 500);
    CHECK(rec.report.residual_history.size() == static_cast<std::size_t>(rec.report.iterations) + 1);
}

TEST_CASE("reconstruction from line data gives the even part and no odd leak")
{
    const Grid2D window = unit_window(12);
    const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, 0.05);
    const OperatorMatrix A = build_operator_matrix(window, S, RadiusGrid(0.0, 3.0, 80), 256);
    const ScalarField2D f(window, [](Point2 p) {
        const Point2 a = p - Point2{0.12, 0.17};
        return std::exp(-dot(a, a) / 0.04) + 0.3 * p.x + 0.4 * p.y;
    });
    const Line2D axis({0.0, 0.0}, {1.0, 0.0});
    const Reconstruction rec = reconstruct_cg(A.apply(f), A, 2000, 1e-12);
    const ScalarField2D even = even_part(f, axis);
    CHECK((rec.field - even).l2() / even.l2() <= 0.02);
    CHECK(odd_part(rec.field, axis).l2() / rec.field.l2() <= 1e-6);
    const auto& h = rec.report.residual_history;
    for (std::size_t k = 1; k < h.size(); ++k)
        CHECK(h[k] <= h[k - 1] * (1.0 + 1e-12));
}

TEST_CASE("reconstruction of zero data returns zero without iterating")
{
    const Grid2D window = unit_window(6);
    const OperatorMatrix A =
        build_operator_matrix(window, CenterSet::circle({0.0, 0.0}, 1.0, 16), RadiusGrid(0.0, 2.0, 10), 64);
    const Reconstruction rec = reconstruct_cg(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(A.rows())), A);
    CHECK(rec.report.converged);
    CHECK(rec.report.iterations == 0);
    CHECK(rec.field.max_abs() == 0.0);
}

TEST_CASE("reconstruction rejects mismatched or mean-normalized data")
{
    const Grid2D window = unit_window(6);
    const CenterSet S = CenterSet::circle({0.0, 0.0}, 1.0, 16);
    const RadiusGrid radii(0.0, 2.0, 10);
    const OperatorMatrix A = build_operator_matrix(window, S, radii, 64);
    CHECK_THROWS_AS(reconstruct_cg(Eigen::VectorXd::Zero(7), A), std::invalid_argument);
    const ScalarField2D f(window, [](Point2 p) { return 1.0 + p.x; });
    const Sinogram mean = forward_sinogram(f, S, radii, 64, Normalization::Mean);
    CHECK_THROWS_AS(reconstruct_cg(mean, A), std::invalid_argument);
    const Sinogram other = forward_sinogram(f, S, RadiusGrid(0.0, 2.0, 11), 64);
    CHECK_THROWS_AS(reconstruct_cg(other, A), std::invalid_argument);
    CHECK_NOTHROW(reconstruct_cg(forward_sinogram(f, S, radii, 64), A));
}

TEST_CASE("tangent test: far small circle violates, and its data is far from zero")
{
    const Phantom f(GaussianBump{{0.0, 0.0}, 0.1, 1.0});
    const ScalarField2D field = sample_phantom(f, Grid2D::centered({0.0, 0.0}, 0.8, 0.01));
    const CenterSet S = CenterSet::circle({3.0, 0.0}, 0.2, 64);
    const TangentReport rep = tangent_criterion(S, field);
    CHECK(rep.verdict == TangentVerdict::NecessaryConditionViolated);
    CHECK(rep.missing > 0);
    CHECK(rep.tested == 64);
    const Sinogram g = forward_sinogram(f, S, RadiusGrid(2.5, 3.5, 40), 256);
    CHECK(g.max_abs() > 0.1 * sinogram_scale(f, 256));
}

TEST_CASE("tangent test: line through an odd phantom is consistent and its data vanishes")
{
    const Phantom f(standard_witness(1, {}));
    const ScalarField2D field = sample_phantom(f, Grid2D::centered({0.0, 0.0}, 2.5, 0.02));
    const CenterSet S = CenterSet::line({0.0, 0.0}, {1.0, 0.0}, 3.0, 0.05);
    const TangentReport rep = tangent_criterion(S, field);
    CHECK(rep.verdict == TangentVerdict::Consistent);
    CHECK(rep.missing == 0);
    const Sinogram g = forward_sinogram(f, S, RadiusGrid(0.0, 3.0, 40), 128);
    CHECK(g.max_abs() <= 1e-10 * sinogram_scale(f, 128));
}

TEST_CASE("tangent test on a zero field has no support to test against")
{
    const ScalarField2D zero(Grid2D::centered({0.0, 0.0}, 0.5, 0.05));
    CHECK_THROWS_AS(tangent_criterion(CenterSet::circle({0.0, 0.0}, 1.0, 16), zero), std::domain_error);
}

TEST_CASE("spectrum csv is descending and the column cap is enforced")
{
    const OperatorMatrix A =
        build_operator_matrix(unit_window(6), CenterSet::circle({0.0, 0.0}, 1.0, 16), RadiusGrid(0.0, 2.0, 10), 64);
    const SpectrumReport rep = singular_spectrum(A);
    std::ostringstream os;
    write_spectrum_csv(os, rep);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "index,sigma");
    std::vector<double> read;
    while (std::getline(is, line))
        read.push_back(std::stod(line.substr(line.find(',') + 1)));
    CHECK(read.size() == 36);
    CHECK(descending(read));

    CHECK_THROWS_AS(singular_spectrum(Eigen::MatrixXd::Ones(2, 5), kNearKernelThreshold, 4), std::length_error);
    CHECK_THROWS_AS(singular_spectrum(Eigen::MatrixXd(0, 0)), std::invalid_argument);
}

} // TEST_SUITE
