#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epstein_kit/field.hpp"

namespace ek {

// Metric and field files are sectioned key = value text (INI). Unknown sections
// or keys raise ConfigError.
//
//   [metric]                       [field]
//   catalog = torus-bump           kind = trig
//                                  offset = 0.1
//   [metric]                       terms = 0.3 1 0 0.2, 0.2 0 1 0.5
//   kind = trig
//   offset = 1.0                   [field]
//   terms = 0.02 1 0 0             kind = constant
//                                  value = 0.4
//   [metric]
//   kind = grid
//   file = phi.csv                 (relative to the config file)
MetricField load_metric_config(const std::filesystem::path& path);
ScalarFieldPtr load_field_config(const std::filesystem::path& path);

// A catalog name, or a path to a metric config (.ini, .toml, .cfg) or phi grid (.csv).
MetricField metric_from_spec(const std::string& spec);

// "amp m n phase" groups separated by commas.
std::vector<TrigTerm> parse_terms(const std::string& text);
double parse_double(const std::string& text, const std::string& what);

// Header "nx,ny,xmin,xmax,ymin,ymax", one line of those values, then ny rows of nx values.
std::shared_ptr<GridField> read_phi_csv(const std::filesystem::path& path);
std::string phi_csv(const GridField& g);

}  // namespace ek
