#pragma once

#include <json.hpp>
#include <string>

namespace pathcalc {

using Json = nlohmann::json;

// Sorted keys, two-space indent, doubles at 17 significant digits, non-finite
// numbers as null. Identical input gives identical bytes.
std::string canonical_dump(const Json& j);

// Runs one named analysis (integrate, qv, byparts, ito, doleans, girsanov,
// dubins, capm, selfcheck) on JSON options and returns its report. Reports
// carry a boolean "ok" that the CLI maps onto its strict exit code.
Json run_analysis(const std::string& name, const Json& options);

}  // namespace pathcalc
