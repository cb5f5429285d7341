#include "perispec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace perispec::numerics {

void ToleranceConfig::validate() const {
    if (!(rank_threshold > 0.0 && rank_threshold < 1.0))
        throw InputError("rank_threshold must lie in (0,1)");
    if (!(zero_guard > 0.0))
        throw InputError("zero_guard must be positive");
    if (!(quadrature_tol > 0.0))
        throw InputError("quadrature_tol must be positive");
}

void CircleContour::validate() const {
    if (!(radius > 0.0))
        throw InputError("contour radius must be positive");
    if (node_count < 16 || node_count % 2 != 0)
        throw InputError("contour node_count must be even and >= 16");
    if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
        throw InputError("contour center must be finite");
}

Complex CircleContour::node(int j) const {
    const double theta = 2.0 * M_PI * j / node_count;
    return center + radius * Complex(std::cos(theta), std::sin(theta));
}

void require_finite(const Matrix& m, const std::string& what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Complex v = m(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                std::ostringstream os;
                os << what << ": non-finite entry at (" << i << "," << j << ")";
                throw InputError(os.str());
            }
        }
}

int mat_rank(const Matrix& m, const ToleranceConfig& tol) {
    tol.validate();
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = tol.rank_threshold * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

Matrix contour_integrate(const std::function<Matrix(Complex)>& f,
                         const CircleContour& contour) {
    contour.validate();
    Matrix acc;
    for (int j = 0; j < contour.node_count; ++j) {
        const Complex z = contour.node(j);
        Matrix sample = f(z);
        for (Eigen::Index a = 0; a < sample.rows(); ++a)
            for (Eigen::Index b = 0; b < sample.cols(); ++b) {
                const Complex v = sample(a, b);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    std::ostringstream os;
                    os << "contour_integrate: non-finite sample at node " << j
                       << " (z = " << z.real() << (z.imag() < 0 ? " - " : " + ")
                       << std::abs(z.imag()) << "i)";
                    throw NumericsError(os.str());
                }
            }
        // dmu/(2*pi*i) contributes (r/N) e^{i theta_j}
        const Complex w = (z - contour.center) / double(contour.node_count);
        if (acc.size() == 0)
            acc = Matrix::Zero(sample.rows(), sample.cols());
        acc += w * sample;
    }
    return acc;
}

namespace {

long binom(int k, int j) {
    if (j < 0 || j > k) return 0;
    long r = 1;
    for (int i = 0; i < j; ++i) r = r * (k - i) / (i + 1);
    return r;
}

// Union-find clustering of close eigenvalues.
std::vector<std::pair<Complex, int>> cluster(std::vector<Complex> vals) {
    const size_t m = vals.size();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    double scale = 1.0;
    for (const auto& v : vals) scale = std::max(scale, std::abs(v));
    const double eps = kClusterTol * scale;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (std::abs(vals[i] - vals[j]) <= eps) parent[find(int(i))] = find(int(j));
    std::vector<std::pair<Complex, int>> out;
    for (size_t i = 0; i < m; ++i) {
        if (find(int(i)) != int(i)) continue;
        Complex sum = 0.0;
        int cnt = 0;
        for (size_t j = 0; j < m; ++j)
            if (find(int(j)) == int(i)) { sum += vals[j]; ++cnt; }
        out.emplace_back(sum / double(cnt), cnt);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    return out;
}

} // namespace

PolyEigenvalues poly_eigenvalues(const std::vector<Matrix>& coeffs,
                                 const ToleranceConfig& tol) {
    tol.validate();
    if (coeffs.empty()) throw InputError("poly_eigenvalues: empty coefficient list");
    const Eigen::Index n = coeffs[0].rows();
    for (const auto& c : coeffs) {
        if (c.rows() != n || c.cols() != n)
            throw InputError("poly_eigenvalues: coefficient blocks must be square of equal size");
        require_finite(c, "poly_eigenvalues coefficient");
    }

    // effective degree: drop trailing zero blocks
    int d = int(coeffs.size()) - 1;
    while (d > 0 && coeffs[d].norm() == 0.0) --d;
    const int total_dim = d * int(n);

    double coeff_scale = 0.0;
    for (int k = 0; k <= d; ++k) coeff_scale = std::max(coeff_scale, coeffs[k].norm());
    if (coeff_scale == 0.0) throw SingularPencilError("poly_eigenvalues: all coefficients vanish");

    auto eval = [&](Complex mu) {
        Matrix p = coeffs[0];
        Complex power = 1.0;
        for (int k = 1; k <= d; ++k) {
            power *= mu;
            p += power * coeffs[k];
        }
        return p;
    };

    // deg(det P) by DFT interpolation of the determinant on |mu| = rho.
    // Reliable for spectra within |mu| <~ 20, which covers the model scale.
    int deg_det = 0;
    {
        const int N = total_dim + 1;
        const double rho = 2.0;
        std::vector<Complex> dets(N);
        double det_max = 0.0;
        for (int j = 0; j < N; ++j) {
            const double theta = 2.0 * M_PI * j / N;
            const Complex mu = rho * Complex(std::cos(theta), std::sin(theta));
            dets[j] = Eigen::PartialPivLU<Matrix>(eval(mu)).determinant();
            det_max = std::max(det_max, std::abs(dets[j]));
        }
        const double sing_scale = std::pow(std::max(coeff_scale * (1.0 + rho), 1e-300), double(n));
        if (det_max < 1e-12 * sing_scale)
            throw SingularPencilError("singular pencil: det P(mu) vanishes identically");
        for (int k = 0; k < N; ++k) {
            Complex ck = 0.0;
            for (int j = 0; j < N; ++j) {
                const double theta = -2.0 * M_PI * j * k / N;
                ck += dets[j] * Complex(std::cos(theta), std::sin(theta));
            }
            ck /= double(N) * std::pow(rho, k);
            if (std::abs(ck) * std::pow(rho, k) > 1e-10 * det_max) deg_det = k;
        }
    }

    PolyEigenvalues result;
    if (deg_det == 0) {
        result.infinite_multiplicity = total_dim;
        return result;
    }

    // Moebius shift mu = sigma + 1/nu so that the leading block P(sigma) is invertible.
    const Complex candidates[] = {
        {0.0, 0.0}, {0.6180339887, 0.0}, {-0.5, 0.8660254037}, {1.3247179572, -0.7},
        {0.1, -1.1}, {-1.7548776662, 0.25}, {2.2360679775, 1.0}, {-0.31830988, -2.0}};
    Complex sigma = 0.0;
    bool found = false;
    for (const Complex& cand : candidates) {
        Matrix p = eval(cand);
        Eigen::JacobiSVD<Matrix> svd(p);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) > 1e-8 * std::max(sv(0), 1e-300)) {
            sigma = cand;
            found = true;
            break;
        }
    }
    if (!found)
        throw SingularPencilError("poly_eigenvalues: no invertible evaluation point found");

    // Q(nu) = nu^d P(sigma + 1/nu); Q_m = sum_{k >= d-m} P_k * C(k, d-m) * sigma^{k-(d-m)}
    std::vector<Matrix> q(d + 1, Matrix::Zero(n, n));
    for (int m = 0; m <= d; ++m) {
        const int t = d - m;
        for (int k = t; k <= d; ++k) {
            Complex factor = double(binom(k, t));
            for (int e = 0; e < k - t; ++e) factor *= sigma;
            q[m] += factor * coeffs[k];
        }
    }

    Eigen::PartialPivLU<Matrix> lead(q[d]);
    Matrix companion = Matrix::Zero(total_dim, total_dim);
    for (int b = 0; b + 1 < d; ++b)
        companion.block(b * n, (b + 1) * n, n, n) = Matrix::Identity(n, n);
    for (int b = 0; b < d; ++b)
        companion.block((d - 1) * n, b * n, n, n) = -lead.solve(q[b]);

    Eigen::ComplexEigenSolver<Matrix> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericsError("poly_eigenvalues: companion eigensolver failed");

    // The deg_det largest |nu| are the finite spectrum; the rest sit at nu = 0
    // up to Jordan-splitting noise and belong to the infinite bucket.
    std::vector<Complex> nus(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(nus.begin(), nus.end(),
              [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
    std::vector<Complex> finite;
    finite.reserve(deg_det);
    for (int i = 0; i < deg_det; ++i) finite.push_back(sigma + 1.0 / nus[i]);
    result.finite = cluster(std::move(finite));
    result.infinite_multiplicity = total_dim - deg_det;
    return result;
}

} // namespace perispec::numerics
