#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "permtest/group.hpp"
#include "permtest/simulation.hpp"
#include "permtest/test_report.hpp"

// JSON wire formats. All documents carry "schema": "permtest/1"; field order
// is fixed so equal inputs serialize to identical bytes.

namespace permtest {

using ordered_json = nlohmann::ordered_json;

// Permutations serialize as one-line index arrays, sign masks as +/-1 arrays,
// cyclic shifts as {"cyclic": n, "offset": o}.
ordered_json to_json(const GroupElement& g);
GroupElement element_from_json(const ordered_json& j);

// Accepts a JSON array of elements or {"kind": ..., "elements": [...]}.
std::vector<GroupElement> elements_from_json(const ordered_json& j);
std::vector<GroupElement> elements_from_json_text(const std::string& text);
std::vector<GroupElement> elements_from_json_file(const std::string& path);

ordered_json to_json(const TestReport& report);
ordered_json to_json(const AxiomReport& report);
ordered_json to_json(const SimulationConfig& config);
ordered_json to_json(const SimulationReport& report);

std::string trace_csv(const std::vector<TraceRow>& trace);

} // namespace permtest
