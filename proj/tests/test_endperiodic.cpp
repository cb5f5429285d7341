#include <doctest.h>

#include <random>

#include "perispec/endperiodic.hpp"

using namespace perispec;
using namespace perispec::endperiodic;

namespace {

Matrix scalar(double re, double im = 0.0) {
    Matrix m(1, 1);
    m(0, 0) = Complex(re, im);
    return m;
}

// scalar symbol z - a
LaurentSymbol z_minus(double a) {
    return LaurentSymbol(1, 0, {scalar(-a), scalar(1)});
}

LaurentSymbol random_symbol(std::mt19937_64& rng, int n, int band) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Matrix> blocks;
    for (int k = -band; k <= band; ++k) {
        Matrix b(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) b(r, c) = Complex(u(rng), u(rng));
        blocks.push_back(b);
    }
    return LaurentSymbol(n, -band, std::move(blocks));
}

Sequence random_sequence(std::mt19937_64& rng, int bs, int offset, int len) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Sequence s;
    s.offset = offset;
    for (int i = 0; i < len; ++i) {
        Vector v(bs);
        for (int j = 0; j < bs; ++j) v(j) = Complex(u(rng), u(rng));
        s.values.push_back(v);
    }
    return s;
}

} // namespace

TEST_CASE("fl_transform of deltas") {
    Sequence delta0{0, {Vector::Ones(1)}};
    auto samples = fl_transform(delta0, 1.0, 8);
    for (const auto& v : samples) CHECK(std::abs(v(0) - 1.0) < 1e-14);

    Sequence delta1{1, {Vector::Ones(1)}};
    auto s1 = fl_transform(delta1, 1.0, 8);
    for (int j = 0; j < 8; ++j) {
        const double theta = 2.0 * M_PI * j / 8;
        CHECK(std::abs(s1[j](0) - Complex(std::cos(theta), std::sin(theta))) < 1e-14);
    }

    // u(0) = u(1) = 1 vanishes at z = -1
    Sequence two{0, {Vector::Ones(1), Vector::Ones(1)}};
    auto s2 = fl_transform(two, 1.0, 8);
    CHECK(std::abs(s2[4](0)) < 1e-14); // node 4 of 8 is z = -1
}

TEST_CASE("fl_inverse recovers deltas and polynomials") {
    // u_hat == 1 -> delta at 0
    std::vector<Vector> ones(8, Vector::Ones(1));
    CHECK(std::abs(fl_inverse(ones, 1.0, 0)(0) - 1.0) < 1e-14);
    CHECK(std::abs(fl_inverse(ones, 1.0, 3)(0)) < 1e-14);

    // u_hat = z^2 -> delta at 2
    std::vector<Vector> z2(8, Vector::Ones(1));
    for (int j = 0; j < 8; ++j) {
        const double theta = 2.0 * M_PI * 2 * j / 8;
        z2[j](0) = Complex(std::cos(theta), std::sin(theta));
    }
    CHECK(std::abs(fl_inverse(z2, 1.0, 2)(0) - 1.0) < 1e-14);
    CHECK(std::abs(fl_inverse(z2, 1.0, 0)(0)) < 1e-14);
}

TEST_CASE("fl round trip on random sequences") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        const int bs = 1 + int(rng() % 3);
        Sequence u = random_sequence(rng, bs, -3, 7); // support [-3, 3]
        const double r = (rep % 2) ? 1.0 : 0.7;
        auto samples = fl_transform(u, r, 4 * 7);
        for (int n = -3; n <= 3; ++n)
            CHECK((fl_inverse(samples, r, n) - u.at(n)).norm() < 1e-10);
    }
}

TEST_CASE("weighted_norm basics and Parseval") {
    Sequence delta0{0, {Vector::Ones(1)}};
    CHECK(weighted_norm(delta0, 0.7) == doctest::Approx(1.0));

    Sequence delta1{1, {Vector::Ones(1)}};
    CHECK(weighted_norm(delta1, std::log(2.0)) == doctest::Approx(2.0));

    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> du(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        Sequence u = random_sequence(rng, 2, -2, 6);
        const double delta = du(rng);
        const int nodes = 64;
        auto samples = fl_transform(u, std::exp(delta), nodes);
        double lhs = 0.0;
        for (const auto& v : samples) lhs += v.squaredNorm();
        lhs /= nodes; // (1/2pi) integral over the circle
        const double rhs = std::pow(weighted_norm(u, delta), 2);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("symbol_zeros on scalar and block examples") {
    auto z1 = z_minus(0.5).zeros(0.1, 2.0);
    REQUIRE(z1.size() == 1);
    CHECK(std::abs(z1[0].first - 0.5) < 1e-10);
    CHECK(z1[0].second == 1);

    // diag(z - 0.5, z - 2) in the annulus (0.1, 1)
    Matrix b0 = Matrix::Zero(2, 2), b1 = Matrix::Identity(2, 2);
    b0(0, 0) = -0.5;
    b0(1, 1) = -2.0;
    LaurentSymbol diag(2, 0, {b0, b1});
    auto z2 = diag.zeros(0.1, 1.0);
    REQUIRE(z2.size() == 1);
    CHECK(std::abs(z2[0].first - 0.5) < 1e-10);

    // (z - 0.5)^2 = z^2 - z + 0.25
    LaurentSymbol sq(1, 0, {scalar(0.25), scalar(-1), scalar(1)});
    auto z3 = sq.zeros(0.1, 1.0);
    REQUIRE(z3.size() == 1);
    CHECK(z3[0].second == 2);

    CHECK_THROWS_WITH_AS(z_minus(0.5).zeros(0.5, 2.0), doctest::Contains("zero_guard"),
                         NumericsError);
}

TEST_CASE("d_value is the det multiplicity") {
    CHECK(d_value(z_minus(0.5), Complex(0.5, 0)).d == 1);
    LaurentSymbol sq(1, 0, {scalar(0.25), scalar(-1), scalar(1)});
    CHECK(d_value(sq, Complex(0.5, 0)).d == 2);
    auto miss = d_value(z_minus(0.5), Complex(0.9, 0));
    CHECK(miss.d == 0);
    CHECK_FALSE(miss.at_zero);
}

TEST_CASE("is_fredholm on and off the weight circle") {
    CHECK(is_fredholm({z_minus(0.5), 0.0, {}}));
    CHECK_FALSE(is_fredholm({z_minus(0.5), std::log(0.5), {}}));

    Matrix b0 = Matrix::Zero(2, 2), b1 = Matrix::Identity(2, 2);
    b0(0, 0) = -0.5;
    b0(1, 1) = -2.0;
    CHECK(is_fredholm({LaurentSymbol(2, 0, {b0, b1}), 0.0, {}}));
}

TEST_CASE("index convention anchored by the truncation oracle") {
    // ind = -(winding); z - 0.5 at delta = 0 has winding 1
    EndPeriodicOperator op{z_minus(0.5), 0.0, {}};
    CHECK(index(op) == -1);
    auto dims = truncation_kernels(op, 400);
    CHECK(dims.kernel_dim == 0);
    CHECK(dims.cokernel_dim == 1);
    CHECK(dims.kernel_dim - dims.cokernel_dim == index(op));

    // constant invertible symbol
    EndPeriodicOperator id{LaurentSymbol(1, 0, {scalar(1)}), 0.0, {}};
    CHECK(index(id) == 0);
    auto id_dims = truncation_kernels(id, 100);
    CHECK(id_dims.kernel_dim == 0);
    CHECK(id_dims.cokernel_dim == 0);

    // same symbol, weight below the zero: index 0
    EndPeriodicOperator shifted{z_minus(0.5), std::log(0.25), {}};
    CHECK(index(shifted) == 0);
    auto s_dims = truncation_kernels(shifted, 400);
    CHECK(s_dims.kernel_dim == 0);
    CHECK(s_dims.cokernel_dim == 0);
}

TEST_CASE("index errors on non-Fredholm weights") {
    EndPeriodicOperator op{z_minus(0.5), std::log(0.5), {}};
    CHECK_THROWS_AS(index(op), NonFredholmError);
}

TEST_CASE("index_change counts zeros in the annulus") {
    CHECK(index_change(z_minus(0.5), std::log(0.25), 0.0) == 1);
    CHECK(index_change(z_minus(0.5), std::log(2.0), std::log(3.0)) == 0);
    LaurentSymbol sq(1, 0, {scalar(0.25), scalar(-1), scalar(1)});
    CHECK(index_change(sq, std::log(0.25), 0.0) == 2);
}

TEST_CASE("index_change equals the index difference (random symbols)") {
    std::mt19937_64 rng(41);
    int done = 0;
    while (done < 40) {
        auto sym = random_symbol(rng, 1 + int(rng() % 2), 1);
        // place weights in guarded gaps of the zero moduli
        std::vector<double> logs{-1.2, 1.2};
        for (const auto& [z, mult] : sym.all_zeros()) logs.push_back(std::log(std::abs(z)));
        std::sort(logs.begin(), logs.end());
        double d1 = 0, d2 = 0;
        bool ok = false;
        for (size_t i = 0; i + 1 < logs.size() && !ok; ++i)
            for (size_t j = i + 1; j + 1 < logs.size(); ++j) {
                const double lo = 0.5 * (logs[i] + logs[i + 1]);
                const double hi = 0.5 * (logs[j] + logs[j + 1]);
                if (logs[i + 1] - logs[i] > 0.3 && logs[j + 1] - logs[j] > 0.3 && hi > lo) {
                    d1 = lo;
                    d2 = hi;
                    ok = true;
                    break;
                }
            }
        if (!ok) continue;
        ++done;
        const int lhs = index_change(sym, d1, d2);
        const int rhs = index({sym, d1, {}}) - index({sym, d2, {}});
        CHECK(lhs == rhs);
    }
}

TEST_CASE("cap stability: index and truncation difference") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EndPeriodicOperator base{z_minus(0.5), 0.0, {}};
    const int ind = index(base);
    for (int rep = 0; rep < 5; ++rep) {
        EndPeriodicOperator capped = base;
        for (int c = 0; c < 3; ++c) {
            Matrix b(1, 1);
            b(0, 0) = Complex(u(rng), u(rng));
            capped.cap.push_back({int(rng() % 4), int(rng() % 4), b});
        }
        CHECK(index(capped) == ind); // Fredholmness and index are end properties
        auto dims = truncation_kernels(capped, 400);
        CHECK(dims.kernel_dim - dims.cokernel_dim == ind);
    }
}

TEST_CASE("truncation_kernels rejects non-Fredholm operators") {
    CHECK_THROWS_AS(truncation_kernels({z_minus(0.5), std::log(0.5), {}}, 100),
                    NonFredholmError);
}
