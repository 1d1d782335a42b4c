#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "finex/definetti.hpp"
#include "finex/measures.hpp"
#include "finex/mmot.hpp"

namespace finex::serialize {

// JSON schemas (rationals are exact strings "num/den", or "num" when the
// denominator is 1; multi-indices are 1-based):
//   measure:   {"labels":["r","g","b"], "weights":["2/3","1/3","0"]}
//   quantized: {"labels":[...], "N":3, "counts":[2,1,0]}
//   tensor:    {"labels":[...], "order":3,
//               "entries":[{"idx":[1,1,2],"w":"4/27"}, ...]}  (nonzero only)
//   cost:      tensor schema; an entry may carry "infinity":true instead of "w"
//   prior:     {"labels":[...], "N":3,
//               "atoms":[{"weight":"8/27","counts":[3,0,0]}, ...]}

nlohmann::json measure_json(const measures::DiscreteMeasure& m);
measures::DiscreteMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json quantized_json(const measures::QuantizedMeasure& m);
measures::QuantizedMeasure quantized_from_json(const nlohmann::json& j);

nlohmann::json tensor_json(const measures::SignedTensor& t);
measures::SignedTensor tensor_from_json(const nlohmann::json& j);

nlohmann::json cost_json(const mmot::CostTensor& c);
mmot::CostTensor cost_from_json(const nlohmann::json& j);

nlohmann::json prior_json(const definetti::PriorMixture& p);
definetti::PriorMixture prior_from_json(const nlohmann::json& j);

/// Accepts either the quantized schema (counts) or the measure schema
/// (weights); used by CLI inputs that take a one-point marginal.
struct MeasureInput {
    measures::DiscreteMeasure measure;
    std::optional<measures::QuantizedMeasure> quantized;
};
MeasureInput measure_input_from_json(const nlohmann::json& j);

/// Parses text as JSON, rethrowing malformed input as ValidationError.
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

/// Reads and parses a JSON file (ValidationError on I/O or parse problems).
nlohmann::json load_json_file(const std::filesystem::path& path);

/// FNV-1a of a file's bytes, for run manifests.
std::uint64_t file_hash(const std::filesystem::path& path);

} // namespace finex::serialize
