// Benchmark: OpenMP sweep kernels against the serial reference, verifying
// that both produce identical results.

#include <chrono>
#include <iostream>
#include <random>
#include <vector>

#include "perispec/endperiodic.hpp"
#include "perispec/parallel.hpp"
#include "perispec/seifert.hpp"

using namespace perispec;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

endperiodic::LaurentSymbol random_symbol(std::mt19937_64& rng, int n, int band) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<numerics::Matrix> blocks;
        for (int k = -band; k <= band; ++k) {
            numerics::Matrix b(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) b(r, c) = numerics::Complex(u(rng), u(rng));
            blocks.push_back(b);
        }
        try {
            endperiodic::LaurentSymbol sym(n, -band, std::move(blocks));
            endperiodic::index({sym, 0.0, {}});
            return sym;
        } catch (const std::exception&) {
            // resample if the unit circle is hit
        }
    }
}

} // namespace

int main() {
    std::cout << "thread budget: " << thread_budget() << "\n\n";

    {
        std::cout << "seifert check-barmu sweep (a1*a2*a3 <= 2000)\n";
        auto t0 = Clock::now();
        const auto serial = seifert::check_barmu(2000, {{2, 3, 5, 7}}, /*parallel=*/false);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto par = seifert::check_barmu(2000, {{2, 3, 5, 7}}, /*parallel=*/true);
        const double tp = seconds_since(t0);
        bool same = serial.checked == par.checked && serial.failed == par.failed;
        for (size_t i = 0; same && i < serial.rows.size(); ++i)
            same = serial.rows[i].fibers == par.rows[i].fibers &&
                   serial.rows[i].combo == par.rows[i].combo &&
                   serial.rows[i].mu_bar == par.rows[i].mu_bar;
        std::cout << "  serial   " << ts << " s (" << serial.checked << " instances)\n";
        std::cout << "  parallel " << tp << " s   speedup " << ts / tp << "\n";
        std::cout << "  results identical: " << (same ? "yes" : "NO") << "\n\n";
    }

    {
        std::cout << "end-periodic index batch (120 random symbols, 3 weights each)\n";
        std::mt19937_64 rng(20240817);
        std::vector<endperiodic::LaurentSymbol> symbols;
        for (int i = 0; i < 120; ++i) symbols.push_back(random_symbol(rng, 2, 1));
        const double deltas[3] = {-0.4, 0.0, 0.4};

        auto run = [&](bool parallel) {
            std::vector<long long> out(symbols.size(), 0);
            parallel_for(
                int(symbols.size()),
                [&](int i) {
                    long long acc = 0;
                    for (double d : deltas) {
                        try {
                            acc = 31 * acc + endperiodic::index({symbols[i], d, {}});
                        } catch (const NonFredholmError&) {
                            acc = 31 * acc + 99;
                        }
                    }
                    out[i] = acc;
                },
                parallel);
            return out;
        };
        auto t0 = Clock::now();
        const auto serial = run(false);
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto par = run(true);
        const double tp = seconds_since(t0);
        std::cout << "  serial   " << ts << " s\n";
        std::cout << "  parallel " << tp << " s   speedup " << ts / tp << "\n";
        std::cout << "  results identical: " << (serial == par ? "yes" : "NO") << "\n";
    }
    return 0;
}
