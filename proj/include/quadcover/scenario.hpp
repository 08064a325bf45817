#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quadcover/channel.hpp"
#include "quadcover/energy.hpp"
#include "quadcover/geometry.hpp"
#include "quadcover/optimizer.hpp"

namespace quadcover::cli {

/// Fully validated run configuration.
///
/// The file format is a TOML-compatible sectioned key-value grammar with
/// sections [quadrilateral] [environment] [link] [propulsion] [mission]
/// [optimizer] and the top-level key `transit_model`.
struct Scenario {
  geometry::Quadrilateral quad;
  channel::Environment env;
  std::string environment_source;  ///< "preset:<name>" or "custom"
  channel::LinkBudget link;
  energy::PropulsionParams propulsion;
  energy::MissionSpec mission;
  std::vector<double> payload_bits_list;  ///< payload sweep for reports
  energy::TransitModel transit_model = energy::TransitModel::Horizontal;
  optimizer::SearchSettings search;
};

/// Parses and validates a scenario file.
/// Throws ParseError (malformed input, with line numbers), ValidationError
/// (missing or invalid fields, naming them) or UnknownPresetError.
Scenario load_scenario(const std::string& path);

/// Same, from an in-memory document. `source_name` is used in messages.
Scenario parse_scenario(std::string_view text, const std::string& source_name);

}  // namespace quadcover::cli
