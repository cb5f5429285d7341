#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "perispec/errors.hpp"

namespace perispec::numerics {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct ToleranceConfig {
    double rank_threshold = 1e-9;  // relative singular-value cutoff
    double zero_guard = 1e-3;      // min distance from contours/circles to spectral points
    double quadrature_tol = 1e-10; // target residual of contour quadrature

    void validate() const;
};

// The loop used for residue/Riesz projections, traversed once counterclockwise.
struct CircleContour {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    int node_count = 64;

    void validate() const;
    Complex node(int j) const;   // center + radius * e^{2*pi*i*j/node_count}
};

void require_finite(const Matrix& m, const std::string& what);

// Number of singular values above rank_threshold * sigma_max; 0 for the zero matrix.
int mat_rank(const Matrix& m, const ToleranceConfig& tol = {});

// (1/2*pi*i) * contour integral of f, by the trapezoidal rule on the circle.
// Spectrally accurate for integrands analytic near the contour.
Matrix contour_integrate(const std::function<Matrix(Complex)>& f,
                         const CircleContour& contour);

struct PolyEigenvalues {
    // (eigenvalue, algebraic multiplicity), sorted by (Re, Im)
    std::vector<std::pair<Complex, int>> finite;
    int infinite_multiplicity = 0;
};

// Zeros of det P(mu), P(mu) = sum_k coeffs[k] mu^k, by block-companion
// linearization after a Moebius shift that makes the leading block invertible.
// Throws SingularPencilError when det P vanishes identically.
PolyEigenvalues poly_eigenvalues(const std::vector<Matrix>& coeffs,
                                 const ToleranceConfig& tol = {});

// Relative tolerance used to merge numerically split multiple roots. Double and
// triple roots of exact input split by ~1e-8 and ~5e-6; random simple spectra
// sit far above this.
inline constexpr double kClusterTol = 2e-5;

} // namespace perispec::numerics
