#pragma once

#include <string>

#include "masscone/measure.hpp"
#include "masscone/metric_families.hpp"

namespace masscone::io {

/// Loads a measure from a .json or .csv file (format picked by extension).
/// JSON: {"dim": n, "points": [[...], ...], "weights": [...]}.
/// CSV: one row per atom, n coordinate columns then one weight column.
DiscreteMeasure load_measure(const std::string& path);

DiscreteMeasure parse_measure_json(const std::string& text);
DiscreteMeasure parse_measure_csv(const std::string& text);
std::string measure_to_json(const DiscreteMeasure& mu);
std::string measure_to_csv(const DiscreteMeasure& mu);

/// Loads and validates a metric spec from a .toml or .json file.
ExtendedMetric load_metric(const std::string& path);
ExtendedMetricSpec parse_metric_spec(const std::string& text, bool toml);

/// Translates the TOML subset used by the config files (sections, scalar
/// key = value pairs, flat arrays, comments) into a JSON text. Exposed for
/// tests and tooling.
std::string toml_to_json(const std::string& toml_text);

} // namespace masscone::io
