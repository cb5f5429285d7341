#pragma once

#include <optional>
#include <vector>

#include "perispec/numerics.hpp"

namespace perispec::endperiodic {

using numerics::Complex;
using numerics::Matrix;
using numerics::Vector;
using numerics::ToleranceConfig;

// Matrix Laurent polynomial D(z) = sum_{k=k_min}^{k_max} D_k z^k, the
// Fourier-Laplace symbol of a discrete end-periodic operator (z = e^mu).
class LaurentSymbol {
  public:
    LaurentSymbol(int block_size, int k_min, std::vector<Matrix> blocks,
                  ToleranceConfig tol = {});

    int n() const { return n_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + int(blocks_.size()) - 1; }
    const Matrix& block(int k) const;
    const ToleranceConfig& tol() const { return tol_; }

    Matrix eval(Complex z) const;
    // blocks of the adjoint operator: E_k = D_{-k}^H
    LaurentSymbol adjoint_reflected() const;
    // blocks of the weight-conjugated operator: D_k e^{delta k}
    LaurentSymbol conjugated(double delta) const;

    // zeros of det D(z) in r_min < |z| < r_max (z = 0 excluded), with
    // det multiplicities; errors if a zero sits within zero_guard of a boundary
    std::vector<std::pair<Complex, int>> zeros(double r_min, double r_max) const;
    // all zeros with z != 0
    std::vector<std::pair<Complex, int>> all_zeros() const;

  private:
    int n_, k_min_;
    std::vector<Matrix> blocks_;
    ToleranceConfig tol_;
};

struct CapEntry {
    int row = 0, col = 0;
    Matrix block; // replaces the Toeplitz block at (row, col)
};

// Block-Toeplitz operator T_{ij} = D_{i-j} on weighted half-line sequences,
// with finitely many entries near the corner replaced by the cap.
struct EndPeriodicOperator {
    LaurentSymbol symbol;
    double delta = 0.0;
    std::vector<CapEntry> cap;
};

// Finitely supported block sequence u(offset), ..., u(offset + len - 1).
struct Sequence {
    int offset = 0;
    std::vector<Vector> values;

    int block_size() const { return values.empty() ? 0 : int(values[0].size()); }
    Vector at(int n) const; // zero outside the support
};

// u_hat(z_j) = sum_n u(n) z_j^n at the node_count-th roots of unity scaled by radius.
std::vector<Vector> fl_transform(const Sequence& u, double radius, int node_count);

// (1/2*pi*i) * integral over |z| = radius of u_hat(z) z^{-n-1} dz from samples.
Vector fl_inverse(const std::vector<Vector>& samples, double radius, int n);

// (sum_n e^{2 delta n} |u(n)|^2)^{1/2}
double weighted_norm(const Sequence& u, double delta);

struct DValue {
    int d = 0;
    bool at_zero = true; // false: z0 was not a zero of det D (d = 0, warning)
};

// multiplicity of z0 in the change-of-index formula (det multiplicity)
DValue d_value(const LaurentSymbol& sym, Complex z0);

// no zeros of det D on |z| = e^delta; the cap is ignored (an end property)
bool is_fredholm(const EndPeriodicOperator& op);

// index = -winding(det D, |z| = e^delta), the convention anchored once against
// the truncation oracle (index(z - 0.5, delta = 0) = -1)
int index(const EndPeriodicOperator& op);

struct TruncationKernels {
    int kernel_dim = 0;
    int cokernel_dim = 0;
    int stabilized_at = 0; // sites at which the dims first repeated
};

// SVD-based kernel/cokernel dims of the weighted dense N-site truncation;
// computed at N and 2N, which must agree ("increase N" error otherwise)
TruncationKernels truncation_kernels(const EndPeriodicOperator& op, int N);

// sum of d(z) over zeros with e^delta < |z| < e^delta2; equals
// index(delta) - index(delta2)
int index_change(const LaurentSymbol& sym, double delta, double delta2);

// One-parameter family of symbols; blocks interpolate linearly between nodes.
class SymbolPath {
  public:
    SymbolPath(std::vector<double> grid, std::vector<LaurentSymbol> symbols);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<LaurentSymbol>& symbols() const { return symbols_; }
    const ToleranceConfig& tol() const { return symbols_.front().tol(); }
    int n() const { return symbols_.front().n(); }

    LaurentSymbol at(double t) const;
    SymbolPath reversed() const;

  private:
    std::vector<double> grid_;
    std::vector<LaurentSymbol> symbols_;
};

struct CrossingEvent {
    double t_star = 0.0;
    Complex z_star{};
    int sign = 0;    // +1 leaving the cylinder |z| = 1 (outward), -1 entering
    int local_d = 1; // multiplicity at the crossing (1 for generic paths)
};

struct SpectralCurve {
    std::vector<double> t;
    std::vector<Complex> z;
};

// zeros of det D_t(z) in the annulus matched across a refined t-grid;
// curves may begin/end only at the annulus boundary
std::vector<SpectralCurve> track_spectral_curves(const SymbolPath& path,
                                                 double r_min, double r_max);

struct SpectralFlow {
    int sf = 0;
    std::vector<CrossingEvent> events; // ordered by (t, arg z)
    double r_min = 0.0, r_max = 0.0;   // tracking annulus actually used
};

// annulus boundaries may be forced; 0 requests automatic placement in
// persistent gaps of the zero moduli
SpectralFlow spectral_flow(const SymbolPath& path, double r_min = 0.0, double r_max = 0.0);

} // namespace perispec::endperiodic
