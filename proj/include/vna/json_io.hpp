#pragma once

// Canonical JSON for algebras, classifications, derivation traces and graphs.
// Rationals are strings; emit -> parse -> emit is byte-identical.

#include "vna/derive.hpp"
#include "vna/graph.hpp"

#include <nlohmann/json.hpp>

namespace vna {

using Json = nlohmann::ordered_json;

Json to_json(const RatioGroup& g);
RatioGroup group_from_json(const Json& j);

Json to_json(const Summand& s);
Summand summand_from_json(const Json& j);

Json to_json(const Algebra& a);
Algebra algebra_from_json(const Json& j);

Json to_json(const Classification& c);
Classification classification_from_json(const Json& j);

Json to_json(const DerivationTrace& t);
DerivationTrace trace_from_json(const Json& j);

Json to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);

Json to_json(const WeightedGraph& g, const GraphClassification& c);

/// Reads and parses a JSON file. Throws Error(ParseError).
Json read_json_file(const std::string& path);

}  // namespace vna
