#pragma once

#include <string>

#include <json.hpp>

#include "wba/measures.hpp"

namespace wba {

// {"family":"power","d":-0.5} | {"family":"harmonic"} | {"family":"constant"}
// | {"family":"explicit","path":"weights.txt"} (one positive decimal per line;
// relative paths resolved against base_dir)
WeightSequence load_weights(const nlohmann::json& spec, const std::string& base_dir = ".");
WeightSequence load_weights_file(const std::string& path);

// {"alphabet":["0","1"],"adjacency":[[1,1],[1,0]]}
Sft load_sft(const nlohmann::json& spec);
Sft load_sft_file(const std::string& path);

// {"depth":2,"values":{"00":0.0,"01":1.0,"10":2.0}}; keys must be exactly the
// admissible words of that depth for the paired SFT
Potential load_potential(const nlohmann::json& spec, const Sft& sft);
Potential load_potential_file(const std::string& path, const Sft& sft);

nlohmann::json scheme_to_json(const ConcatenationScheme& sch);

// 12 significant digits, '.' decimal separator
std::string fmt12(double x);

}  // namespace wba
