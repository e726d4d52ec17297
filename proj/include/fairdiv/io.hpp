#pragma once

// JSON and text formats.
//
//   instance:    {"agents": n, "goods": m, "valuations": [[...], ...]}
//                optionally with "metadata": {...}
//   allocation:  {"bundles": [[...], ...], "pool": [...]}
//
// Good and agent indices are 0-based and sorted ascending on output.

#include <string>

#include "fairdiv/mms.hpp"
#include "fairdiv/model.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verify.hpp"
#include "json.hpp"

namespace fairdiv::io {

using Json = nlohmann::ordered_json;

Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

PartialAllocation allocation_from_json(const Json& j);
Json allocation_to_json(const PartialAllocation& x);

Json record_to_json(const MmsRecord& r);
Json trace_to_json(const Trace& trace);
Json report_to_json(const SolveReport& rep);
Json fairness_to_json(const FairnessReport& rep);

/// Indented JSON text with each valuation row kept on one line.
std::string format_instance(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fairdiv::io
