#pragma once

// Internal JSON helpers shared by io.cpp and cli.cpp. Not installed; the
// public API stays free of the vendored nlohmann header.

#include <json.hpp>

#include "masscone/axiom_engine.hpp"
#include "masscone/measure.hpp"
#include "masscone/metric_families.hpp"
#include "masscone/obstruction_lab.hpp"
#include "masscone/warped_cone.hpp"

namespace masscone::io::detail {

using njson = nlohmann::json;

njson parse_toml_lite(const std::string& text);
njson load_config_json(const std::string& path); // .json or .toml by extension

njson measure_to_json_obj(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json_obj(const njson& j, const std::string& context);

njson metric_spec_to_json_obj(const ExtendedMetricSpec& spec);
ExtendedMetricSpec metric_spec_from_json_obj(const njson& j);

ScalingFunction scaling_from_json_obj(const njson& j);
WarpingFunction warping_from_json_obj(const njson& j, double p);
GridSpec grid_from_json_obj(const njson& j);
SigmaSampler sigma_from_json_obj(const njson& j);

njson witness_to_json_obj(const ViolationWitness& w);
njson axiom_report_to_json_obj(const AxiomReport& report);

double number_or_inf(const njson& j, const std::string& key, double fallback);

} // namespace masscone::io::detail
