#pragma once

#include "nonloc/certify.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nonloc {

/// One printed row: cited state groups ("phi_{29,30,31,32}") and printed
/// cells ("a_{01,11}" for zero tables, "c_{100,100}=c_{102,102}" for
/// diagonal tables), kept exactly as printed.
struct FixtureRow {
    int number = 0;
    std::vector<std::string> states;
    std::vector<std::string> entries;
};

struct TableFixture {
    std::string table;  // "I".."V"
    std::string set;    // set selector, e.g. "fourpartite"
    std::string side;   // measuring side, e.g. "BCD"
    std::string symbol; // operator letter used in the cells
    std::string kind;   // "off_diagonal" or "diagonal"
    std::vector<FixtureRow> rows;
};

/// Directory compiled in as NONLOC_DATA_DIR, plus "/tables".
std::filesystem::path default_fixture_dir();

/// Reads <dir>/table_<id>.json; InputError on an unknown id, a missing file or a malformed fixture.
TableFixture load_fixture(std::string_view id, const std::filesystem::path& dir);

struct Erratum {
    int row = 0;
    std::string kind;      // malformed_entry | duplicate_entry | not_implied | not_derivable | unknown_label | label_typo
    std::string printed;   // the cell or state group as printed
    std::string corrected; // recomputed replacement; empty if none was found
};

struct RowResult {
    int row = 0;
    bool matched = false;
    std::string derivation;           // standalone | context | none
    std::vector<std::string> states;  // labels used, after any label correction
    std::vector<std::string> entries; // checked entries "p,q", after corrections, in printed order
};

struct TableReport {
    std::string table;
    std::string kind;
    std::string grouping;
    std::string side;
    bool certificate_saturated = false;
    std::vector<RowResult> rows;
    std::vector<int> matched;
    std::vector<int> missing;
    std::vector<std::string> extra; // proven entries no row accounts for
    std::vector<Erratum> errata;
};

/// Checks each fixture row against the operator space of its grouping.
///
/// A row is matched when every claimed entry holds on the solution space and
/// follows from the constraint rows among the cited states: on their own
/// ("standalone"), or given the other entries the certificate proves zero
/// ("context"). Diagonal rows are checked with all off-diagonal zeros known.
/// Printed cells that are malformed, repeated, false or not derivable are
/// reported as errata together with the nearest derivable replacement; a row
/// whose errata all receive a replacement still counts as matched.
TableReport reproduce_table(const TableFixture& fixture);

TableReport reproduce_table(std::string_view id, const std::filesystem::path& dir);

} // namespace nonloc
