#pragma once

#include <string>

#include <json.hpp>

#include "chaosbreak/pipeline.hpp"

namespace chaosbreak {

/// JSON schema (stages in encryption order, permutation maps 1-based):
/// {
///   "length": 9, "rounds": 1,
///   "stages": [
///     {"type": "perm", "map": [4,5,2,9,8,7,6,3,1]},
///     {"type": "diff", "family": "mod_sub", "key": [..],
///      "init_c": [0], "init_p": []}
///   ]
/// }
nlohmann::json pipeline_to_json(const CipherPipeline& pipe);
CipherPipeline pipeline_from_json(const nlohmann::json& doc);

CipherPipeline load_pipeline(const std::string& path);
void save_pipeline(const CipherPipeline& pipe, const std::string& path);

} // namespace chaosbreak
