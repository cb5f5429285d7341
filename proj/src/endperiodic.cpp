#include "perispec/endperiodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace perispec::endperiodic {

using numerics::kClusterTol;
using numerics::mat_rank;
using numerics::poly_eigenvalues;
using numerics::require_finite;

namespace {

std::string cstr(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

} // namespace

LaurentSymbol::LaurentSymbol(int block_size, int k_min, std::vector<Matrix> blocks,
                             ToleranceConfig tol)
    : n_(block_size), k_min_(k_min), blocks_(std::move(blocks)), tol_(tol) {
    tol_.validate();
    if (n_ <= 0) throw InputError("LaurentSymbol: block size must be positive");
    if (blocks_.empty()) throw InputError("LaurentSymbol: no coefficient blocks");
    for (const auto& b : blocks_) {
        if (b.rows() != n_ || b.cols() != n_)
            throw InputError("LaurentSymbol: blocks must be n x n");
        require_finite(b, "LaurentSymbol block");
    }
    // trim zero blocks at both ends so k_min/k_max are tight
    while (blocks_.size() > 1 && blocks_.back().norm() == 0.0) blocks_.pop_back();
    while (blocks_.size() > 1 && blocks_.front().norm() == 0.0) {
        blocks_.erase(blocks_.begin());
        ++k_min_;
    }
    // det D not identically zero (checked by the shifted polynomial)
    std::vector<Matrix> poly(blocks_.begin(), blocks_.end());
    poly_eigenvalues(poly, tol_);
}

const Matrix& LaurentSymbol::block(int k) const {
    if (k < k_min_ || k > k_max())
        throw InputError("LaurentSymbol::block: k out of range");
    return blocks_[k - k_min_];
}

Matrix LaurentSymbol::eval(Complex z) const {
    Matrix acc = Matrix::Zero(n_, n_);
    Complex p = std::pow(z, k_min_);
    for (const auto& b : blocks_) {
        acc += p * b;
        p *= z;
    }
    return acc;
}

LaurentSymbol LaurentSymbol::adjoint_reflected() const {
    std::vector<Matrix> out;
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
        out.push_back(it->adjoint());
    return LaurentSymbol(n_, -k_max(), std::move(out), tol_);
}

LaurentSymbol LaurentSymbol::conjugated(double delta) const {
    std::vector<Matrix> out;
    for (int k = k_min_; k <= k_max(); ++k)
        out.push_back(std::exp(delta * k) * blocks_[k - k_min_]);
    return LaurentSymbol(n_, k_min_, std::move(out), tol_);
}

std::vector<std::pair<Complex, int>> LaurentSymbol::all_zeros() const {
    std::vector<Matrix> poly(blocks_.begin(), blocks_.end());
    auto eigs = poly_eigenvalues(poly, tol_);
    std::vector<std::pair<Complex, int>> out;
    for (const auto& [z, mult] : eigs.finite) {
        if (std::abs(z) < 1e-9) continue; // z = 0 indexes the symbol's order
        out.emplace_back(z, mult);
    }
    return out;
}

std::vector<std::pair<Complex, int>> LaurentSymbol::zeros(double r_min, double r_max) const {
    if (!(0.0 <= r_min && r_min < r_max))
        throw InputError("LaurentSymbol::zeros: need 0 <= r_min < r_max");
    std::vector<std::pair<Complex, int>> out;
    for (const auto& [z, mult] : all_zeros()) {
        const double az = std::abs(z);
        for (double bound : {r_min, r_max}) {
            if (bound > 0.0 && std::abs(az - bound) < tol_.zero_guard)
                throw NumericsError("symbol zero " + cstr(z) +
                                    " lies within zero_guard of the annulus boundary |z| = " +
                                    std::to_string(bound));
        }
        if (az > r_min && az < r_max) out.emplace_back(z, mult);
    }
    return out;
}

Vector Sequence::at(int n) const {
    const int idx = n - offset;
    if (idx < 0 || idx >= int(values.size())) return Vector::Zero(block_size());
    return values[idx];
}

std::vector<Vector> fl_transform(const Sequence& u, double radius, int node_count) {
    if (!(radius > 0.0)) throw InputError("fl_transform: radius must be positive");
    if (node_count < 1) throw InputError("fl_transform: node_count must be positive");
    std::vector<Vector> out;
    out.reserve(node_count);
    const int bs = u.block_size();
    for (int j = 0; j < node_count; ++j) {
        const double theta = 2.0 * M_PI * j / node_count;
        const Complex z = radius * Complex(std::cos(theta), std::sin(theta));
        Vector acc = Vector::Zero(bs);
        for (int i = 0; i < int(u.values.size()); ++i)
            acc += std::pow(z, u.offset + i) * u.values[i];
        out.push_back(std::move(acc));
    }
    return out;
}

Vector fl_inverse(const std::vector<Vector>& samples, double radius, int n) {
    if (samples.empty()) throw InputError("fl_inverse: no samples");
    const int N = int(samples.size());
    Vector acc = Vector::Zero(samples[0].size());
    for (int j = 0; j < N; ++j) {
        const double theta = -2.0 * M_PI * j * n / N;
        acc += Complex(std::cos(theta), std::sin(theta)) * samples[j];
    }
    return acc / (double(N) * std::pow(radius, n));
}

double weighted_norm(const Sequence& u, double delta) {
    double acc = 0.0;
    for (int i = 0; i < int(u.values.size()); ++i) {
        const int n = u.offset + i;
        acc += std::exp(2.0 * delta * n) * u.values[i].squaredNorm();
    }
    return std::sqrt(acc);
}

DValue d_value(const LaurentSymbol& sym, Complex z0) {
    for (const auto& [z, mult] : sym.all_zeros()) {
        if (std::abs(z - z0) <= kClusterTol * std::max(1.0, std::abs(z0)) * 10.0)
            return DValue{mult, true};
    }
    return DValue{0, false};
}

bool is_fredholm(const EndPeriodicOperator& op) {
    // Fredholmness is an end property: the cap never enters.
    const LaurentSymbol& sym = op.symbol;
    const double r = std::exp(op.delta);
    const int samples = std::max(256, 32 * (sym.k_max() - sym.k_min() + 1) * sym.n());
    double min_sv = std::numeric_limits<double>::infinity();
    double max_sv = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double theta = 2.0 * M_PI * j / samples;
        Matrix d = sym.eval(r * Complex(std::cos(theta), std::sin(theta)));
        Eigen::JacobiSVD<Matrix> svd(d);
        const auto& sv = svd.singularValues();
        min_sv = std::min(min_sv, sv(sv.size() - 1));
        max_sv = std::max(max_sv, sv(0));
    }
    return min_sv > sym.tol().rank_threshold * std::max(max_sv, 1e-300);
}

namespace {

// winding number of det D(z) along |z| = e^delta by adaptive phase tracking
int det_winding(const LaurentSymbol& sym, double delta) {
    const double r = std::exp(delta);
    int N = std::max(512, 64 * (sym.k_max() - sym.k_min() + 1) * sym.n());
    for (int attempt = 0; attempt < 8; ++attempt, N *= 2) {
        std::vector<Complex> dets(N);
        double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
        for (int j = 0; j < N; ++j) {
            const double theta = 2.0 * M_PI * j / N;
            dets[j] = Eigen::PartialPivLU<Matrix>(
                          sym.eval(r * Complex(std::cos(theta), std::sin(theta))))
                          .determinant();
            const double a = std::abs(dets[j]);
            dmin = std::min(dmin, a);
            dmax = std::max(dmax, a);
        }
        if (dmin < 1e-10 * std::max(dmax, 1e-300)) {
            // refine the location for the message
            std::string where = "theta unresolved";
            for (int j = 0; j < N; ++j)
                if (std::abs(dets[j]) == dmin) {
                    where = "z = " + cstr(r * Complex(std::cos(2.0 * M_PI * j / N),
                                                      std::sin(2.0 * M_PI * j / N)));
                    break;
                }
            throw NonFredholmError("det D vanishes on |z| = e^delta near " + where);
        }
        double total = 0.0, max_step = 0.0;
        bool ok = true;
        for (int j = 0; j < N && ok; ++j) {
            const Complex a = dets[j], b = dets[(j + 1) % N];
            const double step = std::arg(b / a);
            max_step = std::max(max_step, std::abs(step));
            if (std::abs(step) > 1.5) ok = false;
            total += step;
        }
        if (!ok) continue;
        const double w = total / (2.0 * M_PI);
        const int wi = int(std::lround(w));
        if (std::abs(w - wi) < 0.01) return wi;
    }
    throw NumericsError("det_winding: phase tracking failed to converge");
}

} // namespace

int index(const EndPeriodicOperator& op) {
    if (!is_fredholm(op)) {
        // identify the on-circle zero for the message
        std::string which = "unlocated";
        for (const auto& [z, mult] : op.symbol.all_zeros())
            if (std::abs(std::log(std::abs(z)) - op.delta) < 10 * op.symbol.tol().zero_guard)
                which = cstr(z);
        throw NonFredholmError("operator is not Fredholm at delta = " +
                               std::to_string(op.delta) + ": det D vanishes near z = " + which);
    }
    return -det_winding(op.symbol, op.delta);
}

int index_change(const LaurentSymbol& sym, double delta, double delta2) {
    if (!(delta <= delta2)) throw InputError("index_change: need delta <= delta2");
    int total = 0;
    for (const auto& [z, mult] : sym.zeros(std::exp(delta), std::exp(delta2)))
        total += mult;
    return total;
}

namespace {

// Dense weighted truncation; rows cover every site an N-column truncation touches.
// Returns the numerical kernel dimension (columns minus rank). Rank-revealing QR
// keeps the stabilization ladder affordable; decayed kernel vectors separate from
// the bulk spectrum by many orders once N clears the decay length.
int truncation_kernel_dim(const LaurentSymbol& sym, double delta,
                          const std::vector<CapEntry>& cap, int N) {
    const int n = sym.n();
    const int kmax = sym.k_max();
    const int rows = N + std::max(kmax, 0);
    Matrix m = Matrix::Zero(rows * n, N * n);
    for (int i = 0; i < rows; ++i)
        for (int j = std::max(0, i - kmax); j < N; ++j) {
            const int k = i - j;
            if (k < sym.k_min()) break;
            if (k > kmax) continue;
            m.block(i * n, j * n, n, n) = std::exp(delta * (i - j)) * sym.block(k);
        }
    for (const auto& c : cap) {
        if (c.row < 0 || c.col < 0)
            throw InputError("cap entries must have nonnegative sites");
        if (c.block.rows() != n || c.block.cols() != n)
            throw InputError("cap blocks must be n x n");
        if (c.row < rows && c.col < N)
            m.block(c.row * n, c.col * n, n, n) = std::exp(delta * (c.row - c.col)) * c.block;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    qr.setThreshold(1e-6);
    return N * n - int(qr.rank());
}

std::vector<CapEntry> adjoint_cap(const std::vector<CapEntry>& cap) {
    std::vector<CapEntry> out;
    for (const auto& c : cap) out.push_back({c.col, c.row, c.block.adjoint()});
    return out;
}

std::pair<int, int> truncation_dims(const EndPeriodicOperator& op, int N) {
    const int ker = truncation_kernel_dim(op.symbol, op.delta, op.cap, N);
    const int coker = truncation_kernel_dim(op.symbol.adjoint_reflected(), -op.delta,
                                            adjoint_cap(op.cap), N);
    return {ker, coker};
}

} // namespace

TruncationKernels truncation_kernels(const EndPeriodicOperator& op, int N_max) {
    if (!is_fredholm(op))
        throw NonFredholmError("truncation_kernels: operator is not Fredholm");
    int cap_extent = 0;
    for (const auto& c : op.cap) cap_extent = std::max({cap_extent, c.row + 1, c.col + 1});
    const int band = op.symbol.k_max() - op.symbol.k_min() + 1;
    // kernel/cokernel vectors decay like e^{-g N} with g the log-distance from
    // the weight circle to the nearest symbol zero; the truncation must clear
    // the 1e-6 rank threshold before the N vs 2N agreement means anything
    double g_min = std::numeric_limits<double>::infinity();
    for (const auto& [z, mult] : op.symbol.all_zeros())
        g_min = std::min(g_min, std::abs(std::log(std::abs(z)) - op.delta));
    int N = std::max(16, cap_extent + band + 4);
    if (std::isfinite(g_min)) N = std::max(N, int(std::ceil(15.0 / g_min)));
    if (N_max < N)
        throw InputError("truncation_kernels: N_max smaller than the minimal truncation " +
                         std::to_string(N));
    std::pair<int, int> prev = truncation_dims(op, N);
    while (2 * N <= N_max) {
        const auto cur = truncation_dims(op, 2 * N);
        if (cur == prev) return TruncationKernels{cur.first, cur.second, N};
        prev = cur;
        N *= 2;
    }
    throw NumericsError("truncation_kernels: dimensions not stabilized up to N = " +
                        std::to_string(N) + "; increase N");
}

SymbolPath::SymbolPath(std::vector<double> grid, std::vector<LaurentSymbol> symbols)
    : grid_(std::move(grid)), symbols_(std::move(symbols)) {
    if (grid_.size() < 2 || grid_.size() != symbols_.size())
        throw InputError("SymbolPath: need matching grid/symbol lists with >= 2 nodes");
    if (grid_.front() != 0.0 || grid_.back() != 1.0)
        throw InputError("SymbolPath: grid must run from 0 to 1");
    for (size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1])) throw InputError("SymbolPath: grid must increase");
    const int n = symbols_.front().n();
    int kmin = symbols_.front().k_min(), kmax = symbols_.front().k_max();
    for (const auto& s : symbols_) {
        if (s.n() != n) throw InputError("SymbolPath: block sizes differ along the path");
        kmin = std::min(kmin, s.k_min());
        kmax = std::max(kmax, s.k_max());
    }
    // pad all node symbols to a common coefficient range
    std::vector<LaurentSymbol> padded;
    for (const auto& s : symbols_) {
        std::vector<Matrix> blocks;
        for (int k = kmin; k <= kmax; ++k)
            blocks.push_back(k >= s.k_min() && k <= s.k_max() ? s.block(k)
                                                              : Matrix::Zero(n, n));
        padded.emplace_back(n, kmin, std::move(blocks), s.tol());
    }
    symbols_ = std::move(padded);
    // endpoint regularity: no spectral points on the unit circle
    for (int end : {0, int(symbols_.size()) - 1}) {
        for (const auto& [z, mult] : symbols_[end].all_zeros())
            if (std::abs(std::log(std::abs(z))) < symbols_[end].tol().zero_guard)
                throw InputError("SymbolPath: endpoint symbol has a det zero on |z| = 1 at z = " +
                                 cstr(z));
    }
}

LaurentSymbol SymbolPath::at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    size_t seg = 0;
    while (seg + 2 < grid_.size() && t > grid_[seg + 1]) ++seg;
    const double t0 = grid_[seg], t1 = grid_[seg + 1];
    const double w = (t - t0) / (t1 - t0);
    const LaurentSymbol &a = symbols_[seg], &b = symbols_[seg + 1];
    std::vector<Matrix> blocks;
    for (int k = a.k_min(); k <= a.k_max(); ++k)
        blocks.push_back((1.0 - w) * a.block(k) + w * b.block(k));
    return LaurentSymbol(a.n(), a.k_min(), std::move(blocks), a.tol());
}

SymbolPath SymbolPath::reversed() const {
    std::vector<double> g;
    std::vector<LaurentSymbol> s;
    for (size_t i = grid_.size(); i-- > 0;) {
        g.push_back(1.0 - grid_[i]);
        s.push_back(symbols_[i]);
    }
    return SymbolPath(std::move(g), std::move(s));
}

namespace {

struct MatchResult {
    bool ok = false;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> deaths; // indices in A without successor
    std::vector<int> births; // indices in B without predecessor
};

double min_pairwise_gap(const std::vector<Complex>& v) {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j) g = std::min(g, std::abs(v[i] - v[j]));
    return g;
}

constexpr double kBoundaryMargin = 0.08; // log-units; curve may begin/end this close

bool near_boundary(Complex z, double r_min, double r_max) {
    const double l = std::log(std::abs(z));
    return std::abs(l - std::log(r_min)) < kBoundaryMargin ||
           std::abs(l - std::log(r_max)) < kBoundaryMargin;
}

MatchResult match_slices(const std::vector<Complex>& A, const std::vector<Complex>& B,
                         double r_min, double r_max) {
    MatchResult res;
    const double gap = std::min(min_pairwise_gap(A), min_pairwise_gap(B));
    if (gap < 1e-12) return res; // coincident zeros: force refinement
    struct Cand { double d; int i, j; };
    std::vector<Cand> cands;
    for (int i = 0; i < int(A.size()); ++i)
        for (int j = 0; j < int(B.size()); ++j)
            cands.push_back({std::abs(A[i] - B[j]), i, j});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
    std::vector<bool> usedA(A.size(), false), usedB(B.size(), false);
    for (const auto& c : cands) {
        if (usedA[c.i] || usedB[c.j]) continue;
        if (c.d >= 0.5 * gap) break; // remaining candidates move too far
        usedA[c.i] = usedB[c.j] = true;
        res.pairs.emplace_back(c.i, c.j);
    }
    for (int i = 0; i < int(A.size()); ++i)
        if (!usedA[i]) {
            if (!near_boundary(A[i], r_min, r_max)) return res;
            res.deaths.push_back(i);
        }
    for (int j = 0; j < int(B.size()); ++j)
        if (!usedB[j]) {
            if (!near_boundary(B[j], r_min, r_max)) return res;
            res.births.push_back(j);
        }
    res.ok = true;
    return res;
}

std::vector<Complex> zeros_in_annulus(const LaurentSymbol& sym, double r_min, double r_max) {
    std::vector<Complex> out;
    for (const auto& [z, mult] : sym.all_zeros()) {
        const double az = std::abs(z);
        if (az > r_min && az < r_max)
            for (int c = 0; c < mult; ++c) out.push_back(z);
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

struct Segment {
    double ta, tb;
    MatchResult match;
};

constexpr double kMinTrackStep = 1e-9;

void build_segments(const SymbolPath& path, double r_min, double r_max, double ta, double tb,
                    std::map<double, std::vector<Complex>>& slices,
                    std::vector<Segment>& out, int depth) {
    auto slice = [&](double t) -> const std::vector<Complex>& {
        auto it = slices.find(t);
        if (it == slices.end())
            it = slices.emplace(t, zeros_in_annulus(path.at(t), r_min, r_max)).first;
        return it->second;
    };
    MatchResult m = match_slices(slice(ta), slice(tb), r_min, r_max);
    if (m.ok) {
        out.push_back({ta, tb, std::move(m)});
        return;
    }
    if (tb - ta < kMinTrackStep || depth > 48)
        throw NumericsError("track_spectral_curves: unresolvable matching in t-window [" +
                            std::to_string(ta) + ", " + std::to_string(tb) +
                            "] (non-generic path)");
    const double tm = 0.5 * (ta + tb);
    build_segments(path, r_min, r_max, ta, tm, slices, out, depth + 1);
    build_segments(path, r_min, r_max, tm, tb, slices, out, depth + 1);
}

} // namespace

std::vector<SpectralCurve> track_spectral_curves(const SymbolPath& path, double r_min,
                                                 double r_max) {
    if (!(0.0 < r_min && r_min < r_max))
        throw InputError("track_spectral_curves: need 0 < r_min < r_max");
    std::map<double, std::vector<Complex>> slices;
    std::vector<Segment> segments;
    // base grid: path nodes plus a uniform refinement
    std::vector<double> base = path.grid();
    for (int j = 1; j < 64; ++j) base.push_back(j / 64.0);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (size_t i = 0; i + 1 < base.size(); ++i)
        build_segments(path, r_min, r_max, base[i], base[i + 1], slices, segments, 0);

    std::vector<SpectralCurve> curves;
    std::map<int, int> active; // index in current slice -> curve id
    bool first = true;
    for (const auto& seg : segments) {
        const auto& A = slices.at(seg.ta);
        const auto& B = slices.at(seg.tb);
        if (first) {
            for (int i = 0; i < int(A.size()); ++i) {
                curves.push_back({{seg.ta}, {A[i]}});
                active[i] = int(curves.size()) - 1;
            }
            first = false;
        }
        std::map<int, int> next;
        for (const auto& [ia, ib] : seg.match.pairs) {
            auto it = active.find(ia);
            int id;
            if (it == active.end()) { // slice acquired a point not tracked before
                curves.push_back({{seg.ta}, {A[ia]}});
                id = int(curves.size()) - 1;
            } else {
                id = it->second;
            }
            curves[id].t.push_back(seg.tb);
            curves[id].z.push_back(B[ib]);
            next[ib] = id;
        }
        for (int ib : seg.match.births) {
            curves.push_back({{seg.tb}, {B[ib]}});
            next[ib] = int(curves.size()) - 1;
        }
        active = std::move(next);
    }
    return curves;
}

namespace {

// nearest zero of det D_t to the prediction, within the annulus
Complex curve_point(const SymbolPath& path, double t, Complex pred, double r_min, double r_max) {
    Complex best{};
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& [z, mult] : path.at(t).all_zeros()) {
        const double az = std::abs(z);
        if (az <= 0.5 * r_min || az >= 2.0 * r_max) continue;
        const double d = std::abs(z - pred);
        if (d < bd) { bd = d; best = z; }
    }
    if (!std::isfinite(bd))
        throw NumericsError("spectral_flow: lost the spectral curve at t = " + std::to_string(t));
    return best;
}

} // namespace

SpectralFlow spectral_flow(const SymbolPath& path, double r_min_opt, double r_max_opt) {
    const double guard = path.tol().zero_guard;

    // place the tracking annulus boundaries in persistent gaps of the zero moduli
    std::vector<double> logs;
    for (int j = 0; j <= 64; ++j) {
        for (const auto& [z, mult] : path.at(j / 64.0).all_zeros()) {
            const double l = std::log(std::abs(z));
            if (std::abs(l) < 1.6) logs.push_back(l);
        }
    }
    std::sort(logs.begin(), logs.end());
    auto pick_boundary = [&](double lo, double hi) {
        double best = 0.5 * (lo + hi), best_d = -1.0;
        std::vector<double> cands{lo, hi};
        for (size_t i = 0; i + 1 < logs.size(); ++i) {
            const double mid = 0.5 * (logs[i] + logs[i + 1]);
            if (mid > lo && mid < hi) cands.push_back(mid);
        }
        for (double c : cands) {
            double d = std::numeric_limits<double>::infinity();
            for (double l : logs) d = std::min(d, std::abs(c - l));
            if (d > best_d) { best_d = d; best = c; }
        }
        if (best_d < 0.03)
            throw NumericsError("spectral_flow: cannot isolate a tracking annulus boundary in [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return best;
    };
    const double r_min = r_min_opt > 0.0 ? r_min_opt : std::exp(pick_boundary(-0.9, -0.2));
    const double r_max = r_max_opt > 0.0 ? r_max_opt : std::exp(pick_boundary(0.2, 0.9));
    if (!(0.0 < r_min && r_min < 1.0 && 1.0 < r_max))
        throw InputError("spectral_flow: annulus must straddle |z| = 1");

    auto curves = track_spectral_curves(path, r_min, r_max);

    SpectralFlow flow;
    flow.r_min = r_min;
    flow.r_max = r_max;
    auto record_event = [&](double t_star, Complex z_star, double bracket) {
        // transversality: slope of ln|z(t)| across the crossing
        const double h = std::max(1e-6, 8.0 * bracket);
        const double tp = std::min(1.0, t_star + h), tmn = std::max(0.0, t_star - h);
        const double ap = std::log(std::abs(curve_point(path, tp, z_star, r_min, r_max)));
        const double amn = std::log(std::abs(curve_point(path, tmn, z_star, r_min, r_max)));
        const double slope = (ap - amn) / (tp - tmn);
        if (std::abs(slope) <= guard)
            throw NumericsError("spectral_flow: tangential crossing at t = " +
                                std::to_string(t_star) + " (|da/dt| below zero_guard)");

        // reject multiplicity > 1 at the crossing
        int local_d = 0;
        for (const auto& [z, mult] : path.at(t_star).all_zeros())
            if (std::abs(z - z_star) < 20.0 * kClusterTol * std::max(1.0, std::abs(z_star)))
                local_d += mult;
        if (local_d > 1)
            throw NumericsError("spectral_flow: crossing with local d > 1 at t = " +
                                std::to_string(t_star) + " (non-generic path)");

        CrossingEvent ev;
        ev.t_star = t_star;
        ev.z_star = z_star;
        ev.sign = slope > 0.0 ? +1 : -1;
        ev.local_d = std::max(local_d, 1);
        flow.events.push_back(ev);
    };
    constexpr double kExactHit = 1e-12;
    for (const auto& curve : curves) {
        const size_t len = curve.t.size();
        std::vector<char> hit(len, 0);
        for (size_t i = 0; i < len; ++i) {
            if (std::abs(std::log(std::abs(curve.z[i]))) < kExactHit) {
                hit[i] = 1; // crossing lands on a grid sample
                record_event(curve.t[i], curve.z[i], 0.0);
            }
        }
        for (size_t i = 0; i + 1 < len; ++i) {
            if (hit[i] || hit[i + 1]) continue;
            const double a0 = std::log(std::abs(curve.z[i]));
            const double a1 = std::log(std::abs(curve.z[i + 1]));
            if (!(a0 * a1 < 0.0)) continue;

            double ta = curve.t[i], tb = curve.t[i + 1], aa = a0;
            Complex za = curve.z[i], zb = curve.z[i + 1];
            for (int iter = 0; iter < 64; ++iter) {
                if (tb - ta < 1e-10 && std::abs(aa) < 1e-10) break;
                const double tm = 0.5 * (ta + tb);
                const Complex zm = curve_point(path, tm, 0.5 * (za + zb), r_min, r_max);
                const double am = std::log(std::abs(zm));
                if (am * aa >= 0.0) { ta = tm; za = zm; aa = am; }
                else { tb = tm; zb = zm; }
            }
            const double t_star = 0.5 * (ta + tb);
            const Complex z_star = curve_point(path, t_star, 0.5 * (za + zb), r_min, r_max);
            record_event(t_star, z_star, tb - ta);
        }
    }
    std::sort(flow.events.begin(), flow.events.end(),
              [](const CrossingEvent& a, const CrossingEvent& b) {
                  if (a.t_star != b.t_star) return a.t_star < b.t_star;
                  return std::arg(a.z_star) < std::arg(b.z_star);
              });
    for (const auto& ev : flow.events) flow.sf += ev.sign;
    return flow;
}

} // namespace perispec::endperiodic
