#include "perispec/json_io.hpp"

#include <fstream>
#include <sstream>

namespace perispec::io {

using numerics::Complex;
using numerics::Matrix;

namespace {

Complex entry_from_json(const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw InputError("matrix entry must be a [re, im] pair");
    return Complex(e[0].get<double>(), e[1].get<double>());
}

Matrix matrix_from_json(const json& j, int n, const std::string& what) {
    if (!j.is_array() || int(j.size()) != n)
        throw InputError(what + ": expected " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (!j[r].is_array() || int(j[r].size()) != n)
            throw InputError(what + ": row " + std::to_string(r) + " must have " +
                             std::to_string(n) + " entries");
        for (int c = 0; c < n; ++c) m(r, c) = entry_from_json(j[r][c]);
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

int get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw InputError(std::string("missing or non-integer field \"") + key + "\"");
    return j[key].get<int>();
}

} // namespace

family::AffineFamily family_from_json(const json& j, numerics::ToleranceConfig tol) {
    const int n = get_int(j, "n");
    if (n <= 0) throw InputError("family: n must be positive");
    if (!j.contains("T") || !j.contains("A")) throw InputError("family: need fields T and A");
    return family::AffineFamily(matrix_from_json(j["T"], n, "T"),
                                matrix_from_json(j["A"], n, "A"), tol);
}

json family_to_json(const family::AffineFamily& fam) {
    return json{{"n", fam.n()}, {"T", matrix_to_json(fam.T())}, {"A", matrix_to_json(fam.A())}};
}

endperiodic::LaurentSymbol symbol_from_json(const json& j, numerics::ToleranceConfig tol) {
    const int n = get_int(j, "n");
    const int k_min = get_int(j, "k_min");
    const int k_max = get_int(j, "k_max");
    if (n <= 0) throw InputError("symbol: n must be positive");
    if (k_max < k_min) throw InputError("symbol: k_max < k_min");
    if (!j.contains("blocks") || !j["blocks"].is_object())
        throw InputError("symbol: missing \"blocks\" object");
    std::vector<Matrix> blocks;
    for (int k = k_min; k <= k_max; ++k) {
        const std::string key = std::to_string(k);
        if (j["blocks"].contains(key))
            blocks.push_back(matrix_from_json(j["blocks"][key], n, "block " + key));
        else
            blocks.push_back(Matrix::Zero(n, n));
    }
    return endperiodic::LaurentSymbol(n, k_min, std::move(blocks), tol);
}

json symbol_to_json(const endperiodic::LaurentSymbol& sym) {
    json blocks = json::object();
    for (int k = sym.k_min(); k <= sym.k_max(); ++k)
        blocks[std::to_string(k)] = matrix_to_json(sym.block(k));
    return json{{"n", sym.n()},
                {"k_min", sym.k_min()},
                {"k_max", sym.k_max()},
                {"blocks", std::move(blocks)}};
}

endperiodic::SymbolPath path_from_json(const json& j, numerics::ToleranceConfig tol) {
    if (!j.contains("grid") || !j["grid"].is_array())
        throw InputError("path: missing \"grid\" array");
    if (!j.contains("symbols") || !j["symbols"].is_array())
        throw InputError("path: missing \"symbols\" array");
    std::vector<double> grid;
    for (const auto& t : j["grid"]) {
        if (!t.is_number()) throw InputError("path: grid entries must be numbers");
        grid.push_back(t.get<double>());
    }
    std::vector<endperiodic::LaurentSymbol> symbols;
    for (const auto& s : j["symbols"]) symbols.push_back(symbol_from_json(s, tol));
    return endperiodic::SymbolPath(std::move(grid), std::move(symbols));
}

json path_to_json(const endperiodic::SymbolPath& path) {
    json symbols = json::array();
    for (const auto& s : path.symbols()) symbols.push_back(symbol_to_json(s));
    return json{{"grid", path.grid()}, {"symbols", std::move(symbols)}};
}

namespace {

json rational_to_json(const Rational& r) {
    return json{{"num", rat_num(r).str()}, {"den", rat_den(r).str()}};
}

} // namespace

json report_to_json(const seifert::InvariantReport& r) {
    return json{{"fibers", r.fibers},
                {"chi", rational_to_json(r.chi)},
                {"vortex_count", r.vortex_count},
                {"moduli_count", r.moduli_count},
                {"eta_dir", rational_to_json(r.etas.eta_dir)},
                {"eta_sign", rational_to_json(r.etas.eta_sign)},
                {"w", rational_to_json(r.w)},
                {"casson", r.casson},
                {"mu_bar", r.mu_bar},
                {"lambda_sw_product", r.lambda_sw_product},
                {"lambda_sw_circle_action", r.lambda_sw_circle},
                {"lambda_sw_conjugation", r.lambda_sw_conjugation},
                {"barmu_ok", r.barmu_ok},
                {"rohlin_parity_ok", r.rohlin_parity_ok}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

std::string curves_csv(const std::vector<endperiodic::SpectralCurve>& curves) {
    std::ostringstream os;
    os << "# perispec curves csv v1: curve,t,re_z,im_z,abs_z\n";
    os.precision(17);
    for (size_t c = 0; c < curves.size(); ++c)
        for (size_t i = 0; i < curves[c].t.size(); ++i) {
            const Complex z = curves[c].z[i];
            os << c << "," << curves[c].t[i] << "," << z.real() << "," << z.imag() << ","
               << std::abs(z) << "\n";
        }
    return os.str();
}

std::string events_csv(const std::vector<endperiodic::CrossingEvent>& events) {
    std::ostringstream os;
    os << "# perispec events csv v1: t_star,re_z,im_z,sign\n";
    os.precision(17);
    for (const auto& e : events)
        os << e.t_star << "," << e.z_star.real() << "," << e.z_star.imag() << "," << e.sign
           << "\n";
    return os.str();
}

std::string sweep_csv(const seifert::BarmuReport& rep) {
    std::ostringstream os;
    os << "# perispec seifert sweep csv v1: fibers,combo,mu_bar,pass\n";
    for (const auto& row : rep.rows) {
        for (size_t i = 0; i < row.fibers.size(); ++i)
            os << (i ? " " : "") << row.fibers[i];
        os << "," << rat_str(row.combo) << "," << row.mu_bar << "," << (row.pass ? 1 : 0) << "\n";
    }
    return os.str();
}

} // namespace perispec::io
