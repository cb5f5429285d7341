#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perispec/rational.hpp"

namespace perispec::seifert {

// Pairwise-coprime multiplicities of a Seifert fibered homology sphere
// Sigma(a_1,...,a_n). Multiplicities equal to 1 are dropped; fewer than three
// remaining fibers is the unsupported S^3/lens degenerate case.
class SeifertData {
  public:
    explicit SeifertData(std::vector<long long> multiplicities);

    const std::vector<long long>& fibers() const { return a_; }
    int fiber_count() const { return int(a_.size()); }
    const BigInt& product() const { return product_; }

    // normalized Seifert pairs (a_k, b_k), 0 < b_k < a_k, with
    // e = e0 + sum b_k/a_k = -1/a; e0 is the central plumbing weight
    const std::vector<std::pair<long long, long long>>& pairs() const { return pairs_; }
    long long e0() const { return e0_; }

  private:
    std::vector<long long> a_;
    BigInt product_;
    std::vector<std::pair<long long, long long>> pairs_;
    long long e0_ = 0;
};

struct EtaPair {
    Rational eta_dir;
    Rational eta_sign;
    Rational combo() const { return eta_dir / 2 + eta_sign / 8; }
};

// Star-shaped negative-definite plumbing with |det| = 1.
struct PlumbingGraph {
    std::vector<long long> weights; // vertex 0 is the center
    std::vector<int> parent;        // parent[0] = -1, legs chain to the center
    int rank() const { return int(weights.size()); }
    long long signature = 0;    // = -rank (negative definite)
    bool even = false;          // all vertex weights even
    std::vector<int> wu_class;  // 0/1 vertex coefficients
    long long wu_square = 0;    // w . w
};

struct InvariantReport {
    std::vector<long long> fibers;
    Rational chi;
    long long vortex_count = 0;
    long long moduli_count = 0;
    EtaPair etas;
    Rational w;
    long long casson = 0;
    long long mu_bar = 0;
    long long lambda_sw_product = 0;
    long long lambda_sw_circle = 0;
    long long lambda_sw_conjugation = 0;
    bool barmu_ok = false;         // combo == -mu_bar
    bool rohlin_parity_ok = false; // every lambda_SW variant == mu_bar (mod 2)
};

// chi(F) = 2 - sum (1 - 1/a_k)
Rational euler_orbifold(const SeifertData& s);

// number of vectors eps, 0 <= eps_k < a_k, with sum eps_k/a_k <= -chi/2
long long vortex_count(const SeifertData& s);

// s(b,a) = sum_{k=1}^{a-1} ((k/a))((kb/a)); requires gcd(a,b) = 1
Rational dedekind_sum(const BigInt& b, const BigInt& a);

// Closed forms for the adapted Seifert metric (Dedekind sums / lattice counts):
//   eta_sign = -e - 3 + 12 sum_k s(b_k, a_k),          e = -1/a,
//   casson   = (1/24)[ a(2-n+sum 1/a_k^2)... ] (Casson-Walker-Lescop form),
//   eta_dir  = 2(-casson - moduli) - eta_sign/4.
EtaPair eta_invariants(const SeifertData& s);

// w = -(eta_dir/2 + eta_sign/8)
Rational w_correction(const SeifertData& s);

// lambda(Y) = -(moduli_count + combo); integer by construction
long long casson(const SeifertData& s);

PlumbingGraph plumbing_graph(const SeifertData& s);

// (signature(W) - w.w)/8 over the canonical plumbing
long long mu_bar(const SeifertData& s);

struct LambdaSW {
    long long product = 0;      // S^1 x Y
    long long circle_action = 0;
    long long conjugation = 0;
};

LambdaSW lambda_sw_mapping_tori(const SeifertData& s);

InvariantReport report(const SeifertData& s);

struct BarmuRow {
    std::vector<long long> fibers;
    Rational combo;
    long long mu_bar = 0;
    bool pass = false;
};

struct BarmuReport {
    std::vector<BarmuRow> rows;
    long long checked = 0;
    long long failed = 0;
    bool all_pass() const { return failed == 0; }
};

// every Sigma(a1,a2,a3) with a1 a2 a3 <= max_product, plus the extra tuples
BarmuReport check_barmu(long long max_product,
                        const std::vector<std::vector<long long>>& extra = {},
                        bool parallel = true);

// all pairwise-coprime triples 2 <= a1 < a2 < a3 with product <= max_product
std::vector<std::vector<long long>> coprime_triples(long long max_product);

} // namespace perispec::seifert
