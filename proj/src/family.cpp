#include "perispec/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace perispec::family {

using numerics::CircleContour;
using numerics::contour_integrate;
using numerics::mat_rank;
using numerics::poly_eigenvalues;
using numerics::require_finite;

AffineFamily::AffineFamily(Matrix T, Matrix A, ToleranceConfig tol)
    : T_(std::move(T)), A_(std::move(A)), tol_(tol) {
    tol_.validate();
    if (T_.rows() != T_.cols() || A_.rows() != A_.cols() || T_.rows() != A_.rows())
        throw InputError("AffineFamily: T and A must be square of equal dimension");
    if (T_.rows() == 0) throw InputError("AffineFamily: empty matrices");
    require_finite(T_, "AffineFamily T");
    require_finite(A_, "AffineFamily A");
    // rejects degenerate pencils (det identically zero) at construction
    auto eigs = poly_eigenvalues({T_, A_}, tol_);
    locations_ = std::move(eigs.finite);
}

double AffineFamily::distance_to_spectrum(Complex mu) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [loc, mult] : locations_) d = std::min(d, std::abs(mu - loc));
    return d;
}

double AffineFamily::default_contour_radius(Complex mu) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [loc, mult] : locations_)
        if (std::abs(mu - loc) > numerics::kClusterTol * std::max(1.0, std::abs(mu)))
            d = std::min(d, std::abs(mu - loc));
    return std::isfinite(d) ? d / 2.0 : 1.0;
}

namespace {

std::string cstr(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

Matrix solve_at(const AffineFamily& fam, Complex mu) {
    Eigen::PartialPivLU<Matrix> lu(fam.eval(mu));
    return lu.solve(Matrix::Identity(fam.n(), fam.n()));
}

// resolvent samples on a validated contour around mu_j
struct ContourSamples {
    CircleContour contour;
    std::vector<Matrix> resolvents; // at contour.node(j)
    double r_scale = 0.0;           // max Frobenius norm of the samples
};

ContourSamples sample_resolvent(const AffineFamily& fam, Complex mu_j, int node_count) {
    ContourSamples s;
    const double radius = fam.default_contour_radius(mu_j);
    if (radius < fam.tol().zero_guard) {
        throw NumericsError("contour around " + cstr(mu_j) +
                            " would pass within zero_guard of another spectral point");
    }
    s.contour = CircleContour{mu_j, radius, node_count};
    s.contour.validate();
    s.resolvents.reserve(node_count);
    for (int j = 0; j < node_count; ++j) {
        Matrix r = solve_at(fam, s.contour.node(j));
        s.r_scale = std::max(s.r_scale, r.norm());
        s.resolvents.push_back(std::move(r));
    }
    return s;
}

// A_{-p} = (1/N) sum_j e^{i p theta_j} r^p R(z_j)
Matrix principal_coefficient(const ContourSamples& s, int p) {
    const int N = s.contour.node_count;
    Matrix acc = Matrix::Zero(s.resolvents[0].rows(), s.resolvents[0].cols());
    const double rp = std::pow(s.contour.radius, p);
    for (int j = 0; j < N; ++j) {
        const double theta = 2.0 * M_PI * j / N;
        acc += Complex(std::cos(p * theta), std::sin(p * theta)) * s.resolvents[j];
    }
    return (rp / N) * acc;
}

LaurentData laurent_impl(const AffineFamily& fam, Complex mu, int order_request) {
    const double dist = fam.distance_to_spectrum(mu);
    LaurentData out;
    if (dist > fam.tol().zero_guard) {
        // regular point: empty principal part
        if (order_request > 0)
            throw NumericsError("laurent_coefficients: requested order " +
                                std::to_string(order_request) + " exceeds detected pole order 0");
        return out;
    }
    const int n = fam.n();
    auto samples = sample_resolvent(fam, mu, 256);
    std::vector<Matrix> coeffs;
    int order = 0;
    for (int p = 1; p <= n; ++p) {
        Matrix ap = principal_coefficient(samples, p);
        const double thresh = fam.tol().rank_threshold * samples.r_scale *
                              std::pow(samples.contour.radius, p);
        coeffs.push_back(std::move(ap));
        if (coeffs.back().norm() > thresh) order = p;
    }
    coeffs.resize(order);
    if (order_request > order)
        throw NumericsError("laurent_coefficients: requested order " +
                            std::to_string(order_request) + " exceeds detected pole order " +
                            std::to_string(order));
    out.order = order;
    out.principal = std::move(coeffs);
    return out;
}

} // namespace

std::vector<SpectralPoint> spectral_set(const AffineFamily& fam) {
    std::vector<SpectralPoint> points;
    for (const auto& [mu, mult] : fam.spectral_locations()) {
        SpectralPoint pt;
        pt.mu = mu;
        pt.det_multiplicity = mult;
        pt.kernel_dim = fam.n() - mat_rank(fam.eval(mu), fam.tol());
        auto [d, chains] = jordan_chain_dim(fam, mu);
        pt.d_value = d;
        pt.proj_rank = residue_projection(fam, mu).second;
        points.push_back(pt);
    }
    return points;
}

Matrix resolvent(const AffineFamily& fam, Complex mu) {
    for (const auto& [loc, mult] : fam.spectral_locations()) {
        if (std::abs(mu - loc) <= fam.tol().zero_guard)
            throw NumericsError("resolvent: mu = " + cstr(mu) +
                                " lies within zero_guard of the spectral point " + cstr(loc));
    }
    return solve_at(fam, mu);
}

Matrix compact_reduction(const AffineFamily& fam, Complex mu0) {
    for (const auto& [loc, mult] : fam.spectral_locations()) {
        if (std::abs(mu0 - loc) <= fam.tol().zero_guard)
            throw NumericsError("compact_reduction: mu0 = " + cstr(mu0) +
                                " lies within zero_guard of the spectral point " + cstr(loc));
    }
    return fam.A() * solve_at(fam, mu0);
}

std::pair<Matrix, int> residue_projection(const AffineFamily& fam, Complex mu) {
    const bool spectral = fam.distance_to_spectrum(mu) <= fam.tol().zero_guard;
    const double radius = fam.default_contour_radius(mu);
    if (radius < fam.tol().zero_guard)
        throw NumericsError("contour around " + cstr(mu) +
                            " would pass within zero_guard of another spectral point");
    CircleContour contour{mu, radius, spectral ? 256 : 64};
    double r_scale = 0.0;
    Matrix p = contour_integrate(
        [&](Complex z) {
            Matrix r = solve_at(fam, z);
            r_scale = std::max(r_scale, r.norm());
            return r;
        },
        contour);
    // rank against the resolvent scale: a pole-free contour integrates to
    // quadrature noise, which must count as rank zero
    Eigen::JacobiSVD<Matrix> svd(p);
    const auto& sv = svd.singularValues();
    const double cutoff = fam.tol().rank_threshold * std::max(sv(0), r_scale * radius);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return {p, rank};
}

std::pair<Matrix, int> residue_projection(const AffineFamily& fam, const SpectralPoint& pt) {
    return residue_projection(fam, pt.mu);
}

LaurentData laurent_coefficients(const AffineFamily& fam, Complex mu, int order_request) {
    return laurent_impl(fam, mu, order_request);
}

LaurentData laurent_coefficients(const AffineFamily& fam, const SpectralPoint& pt,
                                 int order_request) {
    return laurent_impl(fam, pt.mu, order_request);
}

std::pair<int, JordanChainSet> jordan_chain_dim(const AffineFamily& fam, Complex mu) {
    JordanChainSet set;
    if (fam.distance_to_spectrum(mu) > fam.tol().zero_guard)
        return {0, set}; // trivial kernel away from the spectral set

    const int n = fam.n();
    const int m = laurent_impl(fam, mu, 0).order;
    if (m == 0) return {0, set};

    // unknowns x = (b_{-1}, ..., b_{-m}); V = -A
    const Matrix D = fam.eval(mu);
    const Matrix V = -fam.A();
    Matrix sys = Matrix::Zero(m * n, m * n);
    for (int l = 1; l <= m - 1; ++l) {
        sys.block((l - 1) * n, (l - 1) * n, n, n) = D;
        sys.block((l - 1) * n, l * n, n, n) = -V;
    }
    sys.block((m - 1) * n, (m - 1) * n, n, n) = D;

    Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = fam.tol().rank_threshold * std::max(sv(0), 1e-300);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    const int d = m * n - rank;

    for (int c = rank; c < m * n; ++c) {
        std::vector<Vector> chain;
        for (int p = 1; p <= m; ++p)
            chain.push_back(svd.matrixV().col(c).segment((p - 1) * n, n));
        set.chains.push_back(std::move(chain));
    }
    set.solution_space_dim = d;
    return {d, set};
}

std::pair<int, JordanChainSet> jordan_chain_dim(const AffineFamily& fam, const SpectralPoint& pt) {
    return jordan_chain_dim(fam, pt.mu);
}

} // namespace perispec::family
