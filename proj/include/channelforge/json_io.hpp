#pragma once

#include <string>

#include <json.hpp>

#include "channelforge/bounds.hpp"
#include "channelforge/channel.hpp"
#include "channelforge/focksim.hpp"
#include "channelforge/optics.hpp"
#include "channelforge/realization.hpp"

namespace channelforge {

using Json = nlohmann::json;

// Complex matrices travel as {"re": [[...]], "im": [[...]]}.
Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

// Channel document: {"d": int, "kraus": [matrix, ...]} or
// {"d": int, "choi": matrix}; exactly one of the two keys. Emission always
// uses the kraus form.
Json channel_to_json(const KrausSet& k);
KrausSet channel_from_json(const Json& j);

Json plan_to_json(const RealizationPlan& plan);
RealizationPlan plan_from_json(const Json& j);

Json network_to_json(const OpticalNetwork& net);
OpticalNetwork network_from_json(const Json& j);

Json validation_to_json(const ValidationReport& report);
ValidationReport validation_from_json(const Json& j);

Json bounds_to_json(const BoundsReport& report);
BoundsReport bounds_from_json(const Json& j);

Json simulation_to_json(const MonteCarloReport& report);
MonteCarloReport simulation_from_json(const Json& j);

/// Canonical serialization used for every emitted artifact (2-space indent,
/// sorted keys, trailing newline) so identical inputs yield identical bytes.
std::string dump_json(const Json& j);

/// Parses text, converting syntax errors into ErrorCode::Parse with the
/// byte offset in the message.
Json parse_json(const std::string& text);

/// Builtin channel specs: "ad:<eps>", "constmix:<p>:<s>", "id:<d>",
/// "depol:<p>", "ru:<file>" (file holds {"d":…, "pairs":[{"q":…, "u":…}]}).
KrausSet channel_from_builtin(const std::string& spec);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace channelforge
