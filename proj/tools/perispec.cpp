#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "perispec/json_io.hpp"
#include "perispec/parallel.hpp"

using namespace perispec;

namespace {

struct TolOpts {
    double rank = 1e-9, guard = 1e-3, quad = 1e-10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol-rank", rank, "relative singular-value cutoff");
        cmd->add_option("--tol-guard", guard, "min distance to spectral points");
        cmd->add_option("--tol-quad", quad, "target quadrature residual");
    }
    numerics::ToleranceConfig config() const {
        numerics::ToleranceConfig t;
        t.rank_threshold = rank;
        t.zero_guard = guard;
        t.quadrature_tol = quad;
        t.validate();
        return t;
    }
};

std::string cstr(numerics::Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    out << content;
}

int run_family(const std::string& input, bool as_json, const TolOpts& tol) {
    const auto fam = io::family_from_json(io::load_json_file(input), tol.config());
    const auto points = family::spectral_set(fam);
    if (as_json) {
        io::json out = io::json::array();
        for (const auto& p : points)
            out.push_back({{"mu", {p.mu.real(), p.mu.imag()}},
                           {"det_multiplicity", p.det_multiplicity},
                           {"kernel_dim", p.kernel_dim},
                           {"d", p.d_value},
                           {"rank_P", p.proj_rank}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << points.size() << " spectral point(s)\n";
    for (const auto& p : points)
        std::cout << "mu = " << cstr(p.mu) << "  det-mult " << p.det_multiplicity << "  ker-dim "
                  << p.kernel_dim << "  d " << p.d_value << "  rank P " << p.proj_rank << "\n";
    return 0;
}

int run_ep_index(const std::string& input, double delta, const TolOpts& tol) {
    const auto sym = io::symbol_from_json(io::load_json_file(input), tol.config());
    std::cout << endperiodic::index({sym, delta, {}}) << "\n";
    return 0;
}

int run_ep_index_change(const std::string& input, double delta, double delta2,
                        const TolOpts& tol) {
    const auto sym = io::symbol_from_json(io::load_json_file(input), tol.config());
    std::cout << endperiodic::index_change(sym, delta, delta2) << "\n";
    for (const auto& [z, mult] : sym.zeros(std::exp(delta), std::exp(delta2)))
        std::cout << "zero " << cstr(z) << "  d " << mult << "\n";
    return 0;
}

int run_ep_flow(const std::string& input, const std::string& csv_base,
                const std::string& annulus, const TolOpts& tol) {
    const auto path = io::path_from_json(io::load_json_file(input), tol.config());
    double r_min = 0.0, r_max = 0.0;
    if (!annulus.empty()) {
        std::stringstream ss(annulus);
        char comma = 0;
        if (!(ss >> r_min >> comma >> r_max) || comma != ',')
            throw InputError("--annulus expects r_min,r_max");
    }
    const auto flow = endperiodic::spectral_flow(path, r_min, r_max);
    const int ind0 = endperiodic::index({path.symbols().front(), 0.0, {}});
    const int ind1 = endperiodic::index({path.symbols().back(), 0.0, {}});
    std::cout << "SF=" << (flow.sf > 0 ? "+" : "") << flow.sf << "\n";
    std::cout << "endpoints (" << ind0 << ", " << ind1 << ")\n";
    for (const auto& e : flow.events)
        std::cout << "crossing t=" << e.t_star << "  z=" << cstr(e.z_star) << "  sign "
                  << (e.sign > 0 ? "+1" : "-1") << "\n";
    if (!csv_base.empty()) {
        const auto curves = endperiodic::track_spectral_curves(path, flow.r_min, flow.r_max);
        write_file(csv_base + ".curves.csv", io::curves_csv(curves));
        write_file(csv_base + ".events.csv", io::events_csv(flow.events));
    }
    return 0;
}

// seeded random sweep checking the change-of-index identity on each instance
int run_ep_check(int count, unsigned long long seed, const TolOpts& tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Task {
        endperiodic::LaurentSymbol sym;
        double d1, d2;
    };
    std::vector<Task> tasks;
    while (int(tasks.size()) < count) {
        const int n = 1 + int(rng() % 3);
        const int band = 1 + int(rng() % 2);
        std::vector<numerics::Matrix> blocks;
        for (int k = -band; k <= band; ++k) {
            numerics::Matrix b(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) b(r, c) = numerics::Complex(u(rng), u(rng));
            blocks.push_back(b);
        }
        endperiodic::LaurentSymbol sym(n, -band, std::move(blocks), tol.config());
        std::vector<double> logs{-1.4, 1.4};
        for (const auto& [z, mult] : sym.all_zeros()) {
            const double l = std::log(std::abs(z));
            if (std::abs(l) < 1.4) logs.push_back(l);
        }
        std::sort(logs.begin(), logs.end());
        std::vector<double> weights;
        for (size_t i = 0; i + 1 < logs.size(); ++i)
            if (logs[i + 1] - logs[i] > 0.56) weights.push_back(0.5 * (logs[i] + logs[i + 1]));
        if (weights.size() < 2) continue;
        tasks.push_back({sym, weights.front(), weights.back()});
    }
    std::vector<int> verdict(tasks.size(), 0);
    parallel_for(int(tasks.size()), [&](int i) {
        try {
            const auto& t = tasks[i];
            const int via_zeros = endperiodic::index_change(t.sym, t.d1, t.d2);
            const int i1 = endperiodic::index({t.sym, t.d1, {}});
            const int i2 = endperiodic::index({t.sym, t.d2, {}});
            const auto k1 = endperiodic::truncation_kernels({t.sym, t.d1, {}}, 400);
            const auto k2 = endperiodic::truncation_kernels({t.sym, t.d2, {}}, 400);
            const bool ok = via_zeros == i1 - i2 && k1.kernel_dim - k1.cokernel_dim == i1 &&
                            k2.kernel_dim - k2.cokernel_dim == i2;
            verdict[i] = ok ? 0 : 1;
        } catch (const std::exception&) {
            verdict[i] = 2;
        }
    });
    int failures = 0;
    for (size_t i = 0; i < verdict.size(); ++i) {
        if (verdict[i] == 0) continue;
        ++failures;
        std::cout << "instance " << i << ": "
                  << (verdict[i] == 1 ? "routes disagree" : "evaluation error") << "\n";
    }
    std::cout << tasks.size() << " instances, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}

int run_seifert_report(const std::vector<long long>& fibers, bool as_json) {
    const seifert::SeifertData s(fibers);
    const auto r = seifert::report(s);
    if (as_json) {
        std::cout << io::report_to_json(r).dump(2) << "\n";
        return 0;
    }
    std::cout << "Sigma(";
    for (size_t i = 0; i < r.fibers.size(); ++i) std::cout << (i ? "," : "") << r.fibers[i];
    std::cout << ")\n";
    std::cout << "chi            " << rat_str(r.chi) << "\n";
    std::cout << "vortices       " << r.vortex_count << "   moduli " << r.moduli_count << "\n";
    std::cout << "eta_dir        " << rat_str(r.etas.eta_dir) << "\n";
    std::cout << "eta_sign       " << rat_str(r.etas.eta_sign) << "\n";
    std::cout << "w              " << rat_str(r.w) << "\n";
    std::cout << "casson         " << r.casson << "\n";
    std::cout << "mu_bar         " << r.mu_bar << "\n";
    std::cout << "lambda_SW      product " << r.lambda_sw_product << "   circle "
              << r.lambda_sw_circle << "   conjugation " << r.lambda_sw_conjugation << "\n";
    std::cout << "barmu          " << (r.barmu_ok ? "pass" : "FAIL") << "\n";
    std::cout << "rohlin parity  " << (r.rohlin_parity_ok ? "pass" : "FAIL") << "\n";
    return 0;
}

std::vector<std::vector<long long>> parse_extras(const std::vector<std::string>& specs) {
    std::vector<std::vector<long long>> out;
    for (const auto& s : specs) {
        std::vector<long long> fibers;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            fibers.push_back(std::stoll(tok));
        out.push_back(std::move(fibers));
    }
    return out;
}

int run_seifert_sweep(long long max_product, const std::string& csv_out,
                      const std::vector<std::string>& extras) {
    const auto rep = seifert::check_barmu(max_product, parse_extras(extras));
    const std::string csv = io::sweep_csv(rep);
    if (csv_out.empty())
        std::cout << csv;
    else
        write_file(csv_out, csv);
    std::cerr << rep.checked << " instances, " << rep.failed << " failures\n";
    return 0;
}

int run_seifert_check_barmu(long long max_product, const std::vector<std::string>& extras) {
    const auto rep = seifert::check_barmu(max_product, parse_extras(extras));
    for (const auto& row : rep.rows) {
        if (row.pass) continue;
        std::cout << "FAIL Sigma(";
        for (size_t i = 0; i < row.fibers.size(); ++i)
            std::cout << (i ? "," : "") << row.fibers[i];
        std::cout << "): combo = " << rat_str(row.combo) << ", -mu_bar = " << -row.mu_bar << "\n";
        const auto full = seifert::report(seifert::SeifertData(row.fibers));
        std::cout << io::report_to_json(full).dump(2) << "\n";
    }
    if (rep.all_pass()) {
        std::cout << "all pass (" << rep.checked << " instances)\n";
        return 0;
    }
    std::cout << rep.failed << " of " << rep.checked << " instances FAILED\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"perispec: discrete end-periodic operator engine and Seifert invariant calculator"};
    app.require_subcommand(1);

    // family
    auto* cmd_family = app.add_subcommand("family", "spectral data of an affine family T + mu A");
    std::string family_input;
    bool family_json = false;
    TolOpts family_tol;
    cmd_family->add_option("input", family_input, "family JSON file")->required();
    cmd_family->add_flag("--json", family_json, "machine-readable report");
    family_tol.attach(cmd_family);

    // ep
    auto* cmd_ep = app.add_subcommand("ep", "end-periodic operator computations");
    cmd_ep->require_subcommand(1);
    std::string ep_input, ep_csv;
    double ep_delta = 0.0, ep_delta2 = 0.0;
    TolOpts ep_tol;

    auto* cmd_index = cmd_ep->add_subcommand("index", "weighted index of the operator");
    cmd_index->add_option("input", ep_input, "symbol JSON file")->required();
    cmd_index->add_option("--delta", ep_delta, "weight")->required();
    ep_tol.attach(cmd_index);

    auto* cmd_change = cmd_ep->add_subcommand("index-change", "sum of d(z) over the annulus");
    cmd_change->add_option("input", ep_input, "symbol JSON file")->required();
    cmd_change->add_option("--delta", ep_delta, "lower weight")->required();
    cmd_change->add_option("--delta2", ep_delta2, "upper weight")->required();
    ep_tol.attach(cmd_change);

    auto* cmd_flow = cmd_ep->add_subcommand("flow", "spectral flow along a symbol path");
    std::string ep_annulus;
    cmd_flow->add_option("input", ep_input, "path JSON file")->required();
    cmd_flow->add_option("--csv-out", ep_csv, "base name for curve/event CSV files");
    cmd_flow->add_option("--annulus", ep_annulus, "tracking annulus r_min,r_max");
    ep_tol.attach(cmd_flow);

    auto* cmd_check = cmd_ep->add_subcommand("check", "seeded random change-of-index sweep");
    int check_count = 50;
    unsigned long long check_seed = 0;
    cmd_check->add_option("--count", check_count, "number of random symbols");
    cmd_check->add_option("--seed", check_seed, "RNG seed (mandatory)")->required();
    ep_tol.attach(cmd_check);

    // seifert
    auto* cmd_seifert = app.add_subcommand("seifert", "Seifert homology sphere invariants");
    cmd_seifert->require_subcommand(1);
    std::vector<long long> fibers;
    bool seifert_json = false;
    long long max_product = 2000;
    std::string sweep_csv_out;
    std::vector<std::string> extras;

    auto* cmd_report = cmd_seifert->add_subcommand("report", "full invariant report");
    cmd_report->add_option("fibers", fibers, "pairwise-coprime multiplicities")->required();
    cmd_report->add_flag("--json", seifert_json, "machine-readable report");

    auto* cmd_sweep = cmd_seifert->add_subcommand("sweep", "CSV table over a range");
    cmd_sweep->add_option("--max-product", max_product, "bound on a1*a2*a3");
    cmd_sweep->add_option("--csv-out", sweep_csv_out, "output CSV file (stdout otherwise)");
    cmd_sweep->add_option("--extra", extras, "extra instance, e.g. 2,3,5,7")->take_all();

    auto* cmd_barmu = cmd_seifert->add_subcommand("check-barmu", "verify combo = -mu_bar");
    cmd_barmu->add_option("--max-product", max_product, "bound on a1*a2*a3");
    cmd_barmu->add_option("--extra", extras, "extra instance, e.g. 2,3,5,7")->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_family) return run_family(family_input, family_json, family_tol);
        if (*cmd_index) return run_ep_index(ep_input, ep_delta, ep_tol);
        if (*cmd_change) return run_ep_index_change(ep_input, ep_delta, ep_delta2, ep_tol);
        if (*cmd_flow) return run_ep_flow(ep_input, ep_csv, ep_annulus, ep_tol);
        if (*cmd_check) return run_ep_check(check_count, check_seed, ep_tol);
        if (*cmd_report) return run_seifert_report(fibers, seifert_json);
        if (*cmd_sweep) return run_seifert_sweep(max_product, sweep_csv_out, extras);
        if (*cmd_barmu) return run_seifert_check_barmu(max_product, extras);
    } catch (const SingularPencilError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonFredholmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
