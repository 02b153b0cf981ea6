#include "nonloc/serialize.hpp"

#include <fstream>

namespace nonloc {

Json to_json(const StateSet& set)
{
    Json states = Json::array();
    for (const auto& s : set.states()) {
        Json parties = Json::array();
        for (const auto& p : s.parties) {
            Json amps = Json::array();
            for (const auto& a : p.amps) amps.push_back(a.get_str());
            parties.push_back(std::move(amps));
        }
        states.push_back(Json{{"label", s.label}, {"parties", std::move(parties)}});
    }
    return Json{{"n", set.party_count()}, {"dims", set.dims()}, {"family", set.family()}, {"states", std::move(states)}};
}

namespace {

Integer amplitude(const Json& a, const std::string& where)
{
    if (a.is_string()) return parse_integer(a.get<std::string>());
    if (a.is_number_integer()) return Integer(std::to_string(a.get<long long>()));
    throw InputError(where + ": amplitude must be an integer or a decimal string");
}

} // namespace

StateSet state_set_from_json(const Json& j)
{
    if (!j.is_object()) throw InputError("state set must be a JSON object");
    for (const char* key : {"n", "dims", "states"})
        if (!j.contains(key)) throw InputError(std::string("state set is missing '") + key + "'");
    if (!j["n"].is_number_unsigned()) throw InputError("'n' must be a positive integer");
    if (!j["dims"].is_array()) throw InputError("'dims' must be an array");
    std::vector<std::size_t> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_unsigned()) throw InputError("'dims' entries must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    if (dims.size() != j["n"].get<std::size_t>()) throw InputError("'n' does not match the length of 'dims'");
    if (!j["states"].is_array()) throw InputError("'states' must be an array");

    std::vector<ProductState> states;
    for (std::size_t i = 0; i < j["states"].size(); ++i) {
        const auto& s = j["states"][i];
        const std::string where = "state " + std::to_string(i);
        if (!s.is_object() || !s.contains("parties") || !s["parties"].is_array())
            throw InputError(where + ": expected an object with a 'parties' array");
        ProductState ps;
        if (s.contains("label")) {
            if (!s["label"].is_string()) throw InputError(where + ": 'label' must be a string");
            ps.label = s["label"].get<std::string>();
        } else {
            ps.label = "s:" + std::to_string(i + 1);
        }
        for (const auto& p : s["parties"]) {
            if (!p.is_array()) throw InputError(where + ": each party must be an array of amplitudes");
            PartyVector v;
            for (const auto& a : p) v.amps.push_back(amplitude(a, where));
            ps.parties.push_back(std::move(v));
        }
        states.push_back(std::move(ps));
    }
    std::string family = "file";
    if (j.contains("family") && j["family"].is_string()) family = j["family"].get<std::string>();
    return StateSet(std::move(dims), std::move(states), std::move(family));
}

StateSet load_state_set(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return state_set_from_json(j);
}

Json to_json(const RationalMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t p = 0; p < m.dim(); ++p) {
        Json row = Json::array();
        for (std::size_t q = 0; q < m.dim(); ++q) row.push_back(to_fraction_string(m.at(p, q)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const OpSpaceReport& r, const ReportOptions& opt)
{
    Json j{{"grouping", r.grouping.cut_name()}, {"side", r.grouping.side_name()}, {"dim", r.dim}, {"trivial", r.trivial}};
    if (r.witness) j["witness"] = to_json(*r.witness);
    if (opt.basis) {
        Json basis = Json::array();
        for (const auto& b : r.basis) basis.push_back(to_json(b));
        j["basis"] = std::move(basis);
    }
    j["rows_emitted"] = r.stats.rows_emitted;
    j["rows_after_dedup"] = r.stats.rows_after_dedup;
    if (opt.timing) j["elapsed_ms"] = r.stats.elapsed_ms;
    return j;
}

Json to_json(const Certificate& c, const StateSet& set)
{
    Json facts = Json::array();
    for (const auto& f : c.facts) {
        Json entries = Json::array();
        for (const auto& [p, q] : f.entries) entries.push_back(entry_name(set, c.grouping, p, q));
        Json evidence = Json::array();
        for (const auto& [a, b] : f.evidence) evidence.push_back(Json::array({a, b}));
        facts.push_back(Json{{"kind", f.kind == FactKind::EntryZero ? "entry_zero" : "diag_equal"},
                             {"entries", std::move(entries)},
                             {"evidence", std::move(evidence)}});
    }
    return Json{{"grouping", c.grouping.cut_name()},
                {"side", c.grouping.side_name()},
                {"facts", std::move(facts)},
                {"saturated", c.saturated}};
}

std::string overall(const Verdict& v)
{
    if (!v.certified) return "NOT_CERTIFIED";
    return v.all_groupings ? "STRONGLY_NONLOCAL_CERTIFIED" : "TRIVIAL_ON_REQUESTED_GROUPINGS";
}

Json to_json(const Verdict& v, const ReportOptions& opt)
{
    Json groupings = Json::array();
    for (const auto& r : v.results) groupings.push_back(to_json(r, opt));
    Json failing = Json::array();
    for (const auto* r : v.failing())
        failing.push_back(Json{{"grouping", r->grouping.cut_name()}, {"side", r->grouping.side_name()}});
    return Json{{"family", v.family},
                {"overall", overall(v)},
                {"groupings", std::move(groupings)},
                {"failing", std::move(failing)}};
}

Json to_json(const TableReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"row", row.row},
                            {"status", row.matched ? "matched" : "missing"},
                            {"derivation", row.derivation},
                            {"states", row.states},
                            {"entries", row.entries}});
    Json errata = Json::array();
    for (const auto& e : r.errata) {
        Json item{{"row", e.row}, {"kind", e.kind}, {"printed", e.printed}};
        item["corrected"] = e.corrected.empty() ? Json(nullptr) : Json(e.corrected);
        errata.push_back(std::move(item));
    }
    return Json{{"table", r.table},
                {"kind", r.kind},
                {"grouping", r.grouping},
                {"side", r.side},
                {"certificate_saturated", r.certificate_saturated},
                {"matched", r.matched},
                {"missing", r.missing},
                {"extra", r.extra},
                {"errata", std::move(errata)},
                {"rows", std::move(rows)}};
}

} // namespace nonloc
