// JSON / CSV / SVG emission for the library's value types, plus map
// description files (read and write).
#pragma once

#include <string>

#include "json.hpp"

#include "circlenf/diagnostics.hpp"
#include "circlenf/dynamics.hpp"
#include "circlenf/transforms.hpp"

namespace circlenf {

using json = nlohmann::ordered_json;

// decimal string with enough digits to re-read exactly; "inf"/"nan" pass through
std::string real_str(const Real& x);

json series_json(const BiSeries& s);
json series_json(const RadialSeries& s);
json series_json(const ComplexSeries& s);

json multiplier_json(const Multiplier& m);
Multiplier multiplier_from_json(const json& j, int bits);

json map_json(const FoliationMap& F);
FoliationMap map_from_json(const json& j);
FoliationMap map_from_file(const std::string& path);

json normalization_json(const Normalization& norm);
json normal_form_json(const NormalFormPair& nf);
json poly_nf_json(const PolyNormalForm& p);
json neumann_json(const NeumannRun& run);
json tongue_json(const TongueScan& scan);
json cf_json(const ContinuedFraction& cf);
json brjuno_json(const BrjunoReport& rep);
json growth_json(const GrowthProfile& prof);
json slope_json(const SlopeReduction& red, const Real* consistency = nullptr);
json error_json(const Error& e);

std::string tongue_csv(const TongueScan& scan);
std::string growth_csv(const GrowthProfile& prof);
std::string tongue_svg(const TongueScan& scan);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace circlenf
