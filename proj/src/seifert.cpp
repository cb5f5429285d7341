#include "perispec/seifert.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "perispec/parallel.hpp"

namespace perispec::seifert {

SeifertData::SeifertData(std::vector<long long> multiplicities) {
    for (long long a : multiplicities) {
        if (a < 1) throw InputError("SeifertData: multiplicities must be >= 1");
        if (a > 1) a_.push_back(a); // fibers of multiplicity 1 do not change Y
    }
    std::sort(a_.begin(), a_.end());
    if (a_.size() < 3)
        throw InputError("SeifertData: fewer than 3 fibers after dropping 1's "
                         "(S^3/lens degenerate case unsupported)");
    for (size_t i = 0; i < a_.size(); ++i)
        for (size_t j = i + 1; j < a_.size(); ++j)
            if (std::gcd(a_[i], a_[j]) != 1)
                throw InputError("SeifertData: multiplicities " + std::to_string(a_[i]) + " and " +
                                 std::to_string(a_[j]) + " are not coprime");
    product_ = 1;
    for (long long a : a_) product_ *= a;

    // (a/a_k) b_k = -1 (mod a_k), 0 < b_k < a_k; then e0 = (-1 - sum (a/a_k) b_k)/a
    BigInt acc = -1;
    for (long long ak : a_) {
        const BigInt others = product_ / ak;
        const BigInt bk = mod_floor(-mod_inverse(others, ak), ak);
        pairs_.emplace_back(ak, bk.convert_to<long long>());
        acc -= others * bk;
    }
    if (acc % product_ != 0)
        throw NumericsError("SeifertData: Seifert normalization failed");
    e0_ = BigInt(acc / product_).convert_to<long long>();
}

Rational euler_orbifold(const SeifertData& s) {
    Rational chi = 2;
    for (long long ak : s.fibers()) chi -= Rational(ak - 1, ak);
    return chi;
}

long long vortex_count(const SeifertData& s) {
    // exact enumeration of sum eps_k/a_k <= -chi/2, cleared to integers by a
    const Rational bound_r = -euler_orbifold(s) / 2 * Rational(s.product());
    if (bound_r < 0) return 0;
    const auto& a = s.fibers();
    const int n = int(a.size());
    std::vector<BigInt> unit(n); // (a/a_k), the step of eps_k in units of 1/a
    for (int k = 0; k < n; ++k) unit[k] = s.product() / a[k];
    long long count = 0;
    // bound_r has denominator 1 or 2; compare via 2*lhs <= 2*bound
    const BigInt bound2 = rat_num(bound_r * 2);
    std::function<void(int, BigInt)> rec = [&](int k, BigInt acc2) {
        if (k == n) {
            ++count;
            return;
        }
        for (long long e = 0; e < a[k]; ++e) {
            BigInt next = acc2 + 2 * e * unit[k];
            if (next > bound2) break;
            rec(k + 1, next);
        }
    };
    rec(0, BigInt(0));
    return count;
}

Rational dedekind_sum(const BigInt& b, const BigInt& a) {
    if (a < 1) throw InputError("dedekind_sum: a must be >= 1");
    const BigInt br = mod_floor(b, a);
    if (a > 1 && big_gcd(br == 0 ? a : br, a) != 1)
        throw InputError("dedekind_sum: arguments must be coprime");
    // sum (k/a - 1/2)((kb mod a)/a - 1/2); (( )) vanishes only at multiples of a
    Rational total = 0;
    BigInt kb = 0;
    for (BigInt k = 1; k < a; ++k) {
        kb += br;
        if (kb >= a) kb -= a;
        if (kb == 0) continue;
        total += (Rational(k, a) - Rational(1, 2)) * (Rational(kb, a) - Rational(1, 2));
    }
    return total;
}

namespace {

// Casson invariant in the Casson-Walker-Lescop closed form, e = -1/a:
// lambda = (1/24)[ -(1/e)(2 - n + sum 1/a_k^2) - e + 3 sign(e) + 12 sum s(b_k, a_k) ]
Rational casson_closed_form(const SeifertData& s) {
    const BigInt& a = s.product();
    const int n = s.fiber_count();
    Rational acc = Rational(a) * (2 - n); // -(1/e)(2-n) = a(2-n)
    for (const auto& [ak, bk] : s.pairs()) {
        acc += Rational(a, BigInt(ak) * ak);              // -(1/e)/a_k^2
        acc += 12 * dedekind_sum(bk, ak);
    }
    acc += Rational(1, a); // -e
    acc += -3;             // 3 sign(e), sign(e) = -1
    return acc / 24;
}

} // namespace

EtaPair eta_invariants(const SeifertData& s) {
    EtaPair etas;
    const Rational e = Rational(-1, s.product());
    Rational ssum = 0;
    for (const auto& [ak, bk] : s.pairs()) ssum += dedekind_sum(bk, ak);
    etas.eta_sign = -e - 3 + 12 * ssum;
    const Rational lambda = casson_closed_form(s);
    const Rational combo = -lambda - 2 * vortex_count(s);
    etas.eta_dir = 2 * combo - etas.eta_sign / 4;
    if (!is_integer(combo))
        throw NumericsError("eta_invariants: eta_dir/2 + eta_sign/8 is not an integer");
    return etas;
}

Rational w_correction(const SeifertData& s) { return -eta_invariants(s).combo(); }

long long casson(const SeifertData& s) {
    const Rational lambda = -(Rational(2 * vortex_count(s)) + eta_invariants(s).combo());
    return to_integer(lambda, "casson");
}

PlumbingGraph plumbing_graph(const SeifertData& s) {
    PlumbingGraph g;
    g.weights.push_back(s.e0());
    g.parent.push_back(-1);
    for (const auto& [ak, bk] : s.pairs()) {
        // a_k / b_k = [c_1, ..., c_m]^-, all c_i >= 2; weights -c_i along the leg
        long long p = ak, q = bk;
        int prev = 0;
        while (q != 0) {
            const long long c = (p + q - 1) / q; // ceil(p/q)
            g.weights.push_back(-c);
            g.parent.push_back(prev);
            prev = int(g.weights.size()) - 1;
            const long long r = c * q - p;
            p = q;
            q = r;
        }
    }
    const int N = g.rank();

    // children lists and a leaves-to-center elimination order
    std::vector<std::vector<int>> adj(N);
    for (int v = 1; v < N; ++v) {
        adj[v].push_back(g.parent[v]);
        adj[g.parent[v]].push_back(v);
    }
    std::vector<int> deg(N), order;
    for (int v = 0; v < N; ++v) deg[v] = int(adj[v].size());
    std::deque<int> queue;
    std::vector<bool> removed(N, false);
    for (int v = 0; v < N; ++v)
        if (deg[v] <= 1) queue.push_back(v);
    std::vector<int> elim_parent(N, -1);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (removed[v]) continue;
        removed[v] = true;
        order.push_back(v);
        for (int u : adj[v])
            if (!removed[u]) {
                elim_parent[v] = u;
                if (--deg[u] == 1) queue.push_back(u);
            }
    }

    // exact LDL^T along the tree: pivots give inertia and |det|
    std::vector<Rational> piv(N);
    for (int v = 0; v < N; ++v) piv[v] = g.weights[v];
    Rational det = 1;
    int nneg = 0;
    for (int v : order) {
        if (piv[v] == 0)
            throw NumericsError("plumbing_graph: singular pivot in intersection form");
        if (piv[v] < 0) ++nneg;
        det *= piv[v];
        if (elim_parent[v] >= 0) piv[elim_parent[v]] -= Rational(1) / piv[v];
    }
    if (nneg != N)
        throw NumericsError("plumbing_graph: intersection form is not negative definite");
    if (det != -1 && det != 1)
        throw NumericsError("plumbing_graph: |det| of the intersection form is not 1");
    g.signature = -N;
    g.even = std::all_of(g.weights.begin(), g.weights.end(),
                         [](long long w) { return w % 2 == 0; });

    // Wu class: the 0/1 solution of M w = diag(M) (mod 2)
    const int words = (N + 63) / 64;
    std::vector<std::vector<uint64_t>> rows(N, std::vector<uint64_t>(words, 0));
    std::vector<uint8_t> rhs(N);
    auto set_bit = [&](std::vector<uint64_t>& r, int c) { r[c / 64] ^= (uint64_t(1) << (c % 64)); };
    auto get_bit = [&](const std::vector<uint64_t>& r, int c) {
        return (r[c / 64] >> (c % 64)) & 1u;
    };
    for (int v = 0; v < N; ++v) {
        if (g.weights[v] % 2 != 0) set_bit(rows[v], v);
        for (int u : adj[v]) set_bit(rows[v], u);
        rhs[v] = uint8_t(std::llabs(g.weights[v]) % 2);
    }
    std::vector<int> where(N, -1);
    int rank = 0;
    for (int c = 0; c < N && rank < N; ++c) {
        int piv_row = -1;
        for (int r = rank; r < N; ++r)
            if (get_bit(rows[r], c)) { piv_row = r; break; }
        if (piv_row < 0) continue;
        std::swap(rows[rank], rows[piv_row]);
        std::swap(rhs[rank], rhs[piv_row]);
        for (int r = 0; r < N; ++r)
            if (r != rank && get_bit(rows[r], c)) {
                for (int wi = 0; wi < words; ++wi) rows[r][wi] ^= rows[rank][wi];
                rhs[r] ^= rhs[rank];
            }
        where[c] = rank;
        ++rank;
    }
    if (rank != N)
        throw NumericsError("plumbing_graph: Wu-class solve singular mod 2");
    g.wu_class.assign(N, 0);
    for (int c = 0; c < N; ++c)
        if (where[c] >= 0 && rhs[where[c]]) g.wu_class[c] = 1;

    long long ww = 0;
    for (int v = 0; v < N; ++v)
        if (g.wu_class[v]) ww += g.weights[v];
    for (int v = 1; v < N; ++v)
        if (g.wu_class[v] && g.wu_class[g.parent[v]]) ww += 2;
    g.wu_square = ww;
    return g;
}

long long mu_bar(const SeifertData& s) {
    const PlumbingGraph g = plumbing_graph(s);
    const long long num = g.signature - g.wu_square;
    if (num % 8 != 0)
        throw NumericsError("mu_bar: (signature - w.w) not divisible by 8");
    return num / 8;
}

LambdaSW lambda_sw_mapping_tori(const SeifertData& s) {
    LambdaSW out;
    const long long lam = casson(s);
    out.product = -lam;
    out.circle_action = -lam;
    out.conjugation = to_integer(eta_invariants(s).combo(), "lambda_sw conjugation");
    return out;
}

InvariantReport report(const SeifertData& s) {
    InvariantReport r;
    r.fibers = s.fibers();
    r.chi = euler_orbifold(s);
    r.vortex_count = vortex_count(s);
    r.moduli_count = 2 * r.vortex_count;
    r.etas = eta_invariants(s);
    r.w = -r.etas.combo();
    r.casson = casson(s);
    r.mu_bar = mu_bar(s);
    const LambdaSW l = lambda_sw_mapping_tori(s);
    r.lambda_sw_product = l.product;
    r.lambda_sw_circle = l.circle_action;
    r.lambda_sw_conjugation = l.conjugation;
    r.barmu_ok = (r.etas.combo() == Rational(-r.mu_bar));
    auto parity = [&](long long v) { return ((v - r.mu_bar) % 2 + 2) % 2 == 0; };
    r.rohlin_parity_ok = parity(r.lambda_sw_product) && parity(r.lambda_sw_circle) &&
                         parity(r.lambda_sw_conjugation);
    return r;
}

std::vector<std::vector<long long>> coprime_triples(long long max_product) {
    std::vector<std::vector<long long>> out;
    for (long long a1 = 2; a1 * (a1 + 1) * (a1 + 2) <= max_product; ++a1)
        for (long long a2 = a1 + 1; a1 * a2 * (a2 + 1) <= max_product; ++a2) {
            if (std::gcd(a1, a2) != 1) continue;
            for (long long a3 = a2 + 1; a1 * a2 * a3 <= max_product; ++a3) {
                if (std::gcd(a1, a3) != 1 || std::gcd(a2, a3) != 1) continue;
                out.push_back({a1, a2, a3});
            }
        }
    return out;
}

BarmuReport check_barmu(long long max_product,
                        const std::vector<std::vector<long long>>& extra, bool parallel) {
    BarmuReport rep;
    std::vector<std::vector<long long>> cases = coprime_triples(max_product);
    for (const auto& e : extra) cases.push_back(e);
    rep.rows.resize(cases.size());
    parallel_for(
        int(cases.size()),
        [&](int i) {
            const SeifertData s(cases[i]);
            BarmuRow row;
            row.fibers = s.fibers();
            row.combo = eta_invariants(s).combo();
            row.mu_bar = mu_bar(s);
            row.pass = (row.combo == Rational(-row.mu_bar));
            rep.rows[i] = std::move(row);
        },
        parallel);
    rep.checked = static_cast<long long>(rep.rows.size());
    for (const auto& row : rep.rows)
        if (!row.pass) ++rep.failed;
    return rep;
}

} // namespace perispec::seifert
