#pragma once

#include <string>

#include <json.hpp>

#include "perispec/endperiodic.hpp"
#include "perispec/family.hpp"
#include "perispec/seifert.hpp"

namespace perispec::io {

using json = nlohmann::json;

// {"n": int, "T": [[[re,im],...]], "A": [[[re,im],...]]}
family::AffineFamily family_from_json(const json& j, numerics::ToleranceConfig tol = {});
json family_to_json(const family::AffineFamily& fam);

// {"n": int, "k_min": int, "k_max": int, "blocks": {"<k>": [[[re,im],...]]}}
endperiodic::LaurentSymbol symbol_from_json(const json& j, numerics::ToleranceConfig tol = {});
json symbol_to_json(const endperiodic::LaurentSymbol& sym);

// {"grid": [t...], "symbols": [symbol...]}
endperiodic::SymbolPath path_from_json(const json& j, numerics::ToleranceConfig tol = {});
json path_to_json(const endperiodic::SymbolPath& path);

json report_to_json(const seifert::InvariantReport& r);

json load_json_file(const std::string& path);

// CSV writers; the leading comment line pins the column layout.
std::string curves_csv(const std::vector<endperiodic::SpectralCurve>& curves);
std::string events_csv(const std::vector<endperiodic::CrossingEvent>& events);
std::string sweep_csv(const seifert::BarmuReport& rep);

} // namespace perispec::io
