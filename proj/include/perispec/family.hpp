#pragma once

#include <optional>
#include <vector>

#include "perispec/numerics.hpp"

namespace perispec::family {

using numerics::Complex;
using numerics::Matrix;
using numerics::Vector;
using numerics::ToleranceConfig;

// A point of the spectral set of D(mu) = T + mu A with its multiplicity data.
struct SpectralPoint {
    Complex mu{};
    int det_multiplicity = 1; // order of mu as a zero of det D
    int kernel_dim = 1;       // dim ker D(mu)
    int d_value = 1;          // dimension of the chain-system solution space
    int proj_rank = 0;        // rank of the residue projection P_mu
};

// Principal part of the resolvent R_mu at a spectral point.
// principal[p-1] = A_{-p}, p = 1..order.
struct LaurentData {
    int order = 0;
    std::vector<Matrix> principal;
};

// Solutions (b_{-1},...,b_{-m}) of the nested chain system; chains[i][p-1] = b_{-p}.
struct JordanChainSet {
    std::vector<std::vector<Vector>> chains;
    int solution_space_dim = 0;
};

// Affine holomorphic family D(mu) = T + mu A. Immutable; the spectral
// locations are computed (and the pencil validated) at construction.
class AffineFamily {
  public:
    AffineFamily(Matrix T, Matrix A, ToleranceConfig tol = {});

    int n() const { return int(T_.rows()); }
    const Matrix& T() const { return T_; }
    const Matrix& A() const { return A_; }
    const ToleranceConfig& tol() const { return tol_; }

    Matrix eval(Complex mu) const { return T_ + mu * A_; }
    // spectral locations with det multiplicities, sorted by (Re, Im)
    const std::vector<std::pair<Complex, int>>& spectral_locations() const { return locations_; }

    double distance_to_spectrum(Complex mu) const;
    // half the distance to the nearest other spectral point, 1.0 for a lone point
    double default_contour_radius(Complex mu) const;

  private:
    Matrix T_, A_;
    ToleranceConfig tol_;
    std::vector<std::pair<Complex, int>> locations_;
};

std::vector<SpectralPoint> spectral_set(const AffineFamily& fam);

// R_mu = D(mu)^{-1}; refuses evaluation within zero_guard of the spectral set.
Matrix resolvent(const AffineFamily& fam, Complex mu);

// K = A (T + mu0 A)^{-1}; nonzero eigenvalues zeta of K correspond to spectral
// points via zeta = -(mu_j - mu0)^{-1}.
Matrix compact_reduction(const AffineFamily& fam, Complex mu0);

std::pair<Matrix, int> residue_projection(const AffineFamily& fam, Complex mu);
std::pair<Matrix, int> residue_projection(const AffineFamily& fam, const SpectralPoint& pt);

// Principal Laurent coefficients of R_mu at mu_j. order_request = 0 detects the
// pole order; a positive request beyond the detected order is an error.
LaurentData laurent_coefficients(const AffineFamily& fam, Complex mu, int order_request = 0);
LaurentData laurent_coefficients(const AffineFamily& fam, const SpectralPoint& pt,
                                 int order_request = 0);

// Dimension (and a basis) of the solution space of
//   D(mu_j) b_{-m} = 0,   D(mu_j) b_{-l} = V b_{-l-1}  (V = -A),
// with m the detected pole order.
std::pair<int, JordanChainSet> jordan_chain_dim(const AffineFamily& fam, Complex mu);
std::pair<int, JordanChainSet> jordan_chain_dim(const AffineFamily& fam, const SpectralPoint& pt);

} // namespace perispec::family
