#pragma once

#include "nonloc/certify.hpp"
#include "nonloc/tables.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace nonloc {

using Json = nlohmann::ordered_json;

/// {n, dims, family, states: [{label, parties: [["1","0",...], ...]}]}; amplitudes as decimal strings.
Json to_json(const StateSet& set);

/// Inverse of to_json(StateSet). Integer amplitudes may also be JSON numbers.
/// Throws InputError on any schema violation.
StateSet state_set_from_json(const Json& j);

StateSet load_state_set(const std::filesystem::path& path);

/// Rows of "p/q" strings.
Json to_json(const RationalMatrix& m);

struct ReportOptions {
    bool timing = false; // include elapsed_ms (nondeterministic)
    bool basis = false;  // include the full solution basis
};

Json to_json(const OpSpaceReport& r, const ReportOptions& opt = {});

/// Entries are written with composite digit names, e.g. "01,20".
Json to_json(const Certificate& c, const StateSet& set);

/// "STRONGLY_NONLOCAL_CERTIFIED" only when every grouping was requested and trivial.
std::string overall(const Verdict& v);

Json to_json(const Verdict& v, const ReportOptions& opt = {});

Json to_json(const TableReport& r);

} // namespace nonloc
