#include "nonloc/cli.hpp"

#include "nonloc/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nonloc {

namespace {

struct Options {
    std::string set;
    std::string cuts = "all";
    std::string cut;
    std::string side;
    std::string format = "json";
    std::string out;
    unsigned jobs = 1;
    int d_max = 8;
    bool timing = false;
    bool certificates = false;
    bool basis = false;

    std::string table = "all";
    std::string fixtures;
    bool allow_errata = false;

    bool party_cycle = false;
    std::string party_perm;
    std::string digit_perm;
    bool search = false;
};

unsigned default_jobs()
{
    if (const char* env = std::getenv("NONLOC_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

StateSet load_set(const std::string& selector)
{
    if (selector.empty()) throw InputError("--set is required");
    if (selector.starts_with("file:")) return load_state_set(selector.substr(5));
    return construct_named(selector);
}

void guard_dimension(const StateSet& set, int d_max)
{
    for (auto d : set.dims())
        if (d > static_cast<std::size_t>(d_max))
            throw InputError("local dimension " + std::to_string(d) + " exceeds --d-max " + std::to_string(d_max));
}

std::vector<Grouping> pick_groupings(const StateSet& set, const Options& o)
{
    if (!o.cut.empty()) return {parse_grouping(o.cut, o.side, set.party_count())};
    if (o.cuts != "all") throw InputError("--cuts accepts only 'all'; use --cut for a single cut");
    return enumerate_bipartitions(set.party_count());
}

Grouping single_grouping(const StateSet& set, const Options& o)
{
    if (o.cut.empty()) throw InputError("--cut is required");
    return parse_grouping(o.cut, o.side, set.party_count());
}

std::vector<std::size_t> parse_perm(const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw InputError("bad permutation '" + text + "' (expected comma-separated indices)");
        out.push_back(std::stoul(tok));
    }
    return out;
}

std::string join(const std::vector<std::size_t>& v)
{
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

std::string ket_text(const ProductState& s)
{
    std::string out;
    for (const auto& p : s.parties) {
        std::string ket;
        for (std::size_t i = 0; i < p.amps.size(); ++i) {
            if (p.amps[i] == 0) continue;
            const Integer& a = p.amps[i];
            std::string coeff = a == 1 ? "" : a == -1 ? "-" : a.get_str() + "*";
            if (!ket.empty() && a > 0) coeff = "+" + coeff;
            ket += coeff + std::to_string(i);
        }
        out += "|" + ket + ">";
    }
    return out;
}

std::string matrix_text(const RationalMatrix& m)
{
    std::string out;
    for (std::size_t p = 0; p < m.dim(); ++p) {
        out += "   ";
        for (std::size_t q = 0; q < m.dim(); ++q) out += " " + m.at(p, q).get_str();
        out += "\n";
    }
    return out;
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : format_(o.format), path_(o.out), out_(out) {}

    const std::string& format() const { return format_; }

    void write(const std::string& text)
    {
        if (path_.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(path_);
        if (!f) throw InputError("cannot write " + path_);
        f << text;
    }
    void write(const Json& j) { write(j.dump(2) + "\n"); }

private:
    std::string format_;
    std::string path_;
    std::ostream& out_;
};

int cmd_gen(const Options& o, Emitter& em)
{
    const auto set = load_set(o.set);
    if (em.format() == "json") {
        em.write(to_json(set));
    } else if (em.format() == "csv") {
        std::string s = "label";
        for (std::size_t k = 0; k < set.party_count(); ++k) s += std::string(",") + party_name(k);
        s += "\n";
        for (const auto& st : set.states()) {
            s += st.label;
            for (const auto& p : st.parties) {
                std::string amps;
                for (const auto& a : p.amps) amps += (amps.empty() ? "" : " ") + a.get_str();
                s += "," + amps;
            }
            s += "\n";
        }
        em.write(s);
    } else {
        std::string s = set.family() + ": " + std::to_string(set.size()) + " states\n";
        for (const auto& st : set.states()) s += "  " + st.label + "  " + ket_text(st) + "\n";
        em.write(s);
    }
    return kExitOk;
}

int cmd_certify(const Options& o, Emitter& em, std::ostream& err)
{
    const auto set = load_set(o.set);
    guard_dimension(set, o.d_max);
    const auto groupings = pick_groupings(set, o);
    Verdict v = [&] {
        try {
            return certify_groupings(set, groupings, o.jobs);
        } catch (const NonOrthogonalError& e) {
            for (const auto& [a, b] : e.violations()) err << "not orthogonal: " << a << " " << b << "\n";
            throw;
        }
    }();

    std::vector<Certificate> certs;
    std::vector<bool> checked;
    if (o.certificates)
        for (const auto& g : groupings) {
            certs.push_back(derive_certificate(set, g));
            checked.push_back(check_certificate(certs.back(), set, g));
        }

    const ReportOptions ro{o.timing, false};
    if (em.format() == "json") {
        Json j = to_json(v, ro);
        if (o.certificates) {
            Json arr = Json::array();
            for (std::size_t i = 0; i < certs.size(); ++i) {
                Json c = to_json(certs[i], set);
                c["checked"] = checked[i];
                arr.push_back(std::move(c));
            }
            j["certificates"] = std::move(arr);
        }
        em.write(j);
    } else if (em.format() == "csv") {
        std::string s = "grouping,side,dim,trivial,rows_emitted,rows_after_dedup";
        if (o.certificates) s += ",saturated";
        if (o.timing) s += ",elapsed_ms";
        s += "\n";
        for (std::size_t i = 0; i < v.results.size(); ++i) {
            const auto& r = v.results[i];
            s += r.grouping.cut_name() + "," + r.grouping.side_name() + "," + std::to_string(r.dim) + "," +
                 (r.trivial ? "true" : "false") + "," + std::to_string(r.stats.rows_emitted) + "," +
                 std::to_string(r.stats.rows_after_dedup);
            if (o.certificates) s += certs[i].saturated ? ",true" : ",false";
            if (o.timing) s += "," + std::to_string(r.stats.elapsed_ms);
            s += "\n";
        }
        em.write(s);
    } else {
        std::string s = "family " + v.family + "\n";
        for (std::size_t i = 0; i < v.results.size(); ++i) {
            const auto& r = v.results[i];
            s += "  " + r.grouping.cut_name() + " side " + r.grouping.side_name() + ": dim " + std::to_string(r.dim) +
                 (r.trivial ? " trivial" : " nontrivial");
            if (o.certificates) s += certs[i].saturated ? ", certificate saturated" : ", certificate incomplete";
            s += "\n";
            if (r.witness) s += "    witness:\n" + matrix_text(*r.witness);
        }
        s += overall(v) + "\n";
        em.write(s);
    }
    return v.certified ? kExitOk : kExitNegative;
}

int cmd_opspace(const Options& o, Emitter& em)
{
    const auto set = load_set(o.set);
    guard_dimension(set, o.d_max);
    const ReportOptions ro{o.timing, o.basis};
    std::vector<OpSpaceReport> reports;
    for (const auto& g : pick_groupings(set, o)) reports.push_back(solve(set, g));

    if (em.format() == "text") {
        std::string s;
        for (const auto& r : reports) {
            s += r.grouping.cut_name() + " side " + r.grouping.side_name() + ": dim " + std::to_string(r.dim) +
                 ", rows " + std::to_string(r.stats.rows_emitted) + " (" + std::to_string(r.stats.rows_after_dedup) +
                 " distinct)\n";
            if (o.basis)
                for (const auto& b : r.basis) s += "  basis element:\n" + matrix_text(b);
        }
        em.write(s);
        return kExitOk;
    }
    if (em.format() == "csv") {
        std::string s = "grouping,side,dim,trivial,rows_emitted,rows_after_dedup\n";
        for (const auto& r : reports)
            s += r.grouping.cut_name() + "," + r.grouping.side_name() + "," + std::to_string(r.dim) + "," +
                 (r.trivial ? "true" : "false") + "," + std::to_string(r.stats.rows_emitted) + "," +
                 std::to_string(r.stats.rows_after_dedup) + "\n";
        em.write(s);
        return kExitOk;
    }
    if (!o.cut.empty()) {
        em.write(to_json(reports.front(), ro));
    } else {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(to_json(r, ro));
        em.write(arr);
    }
    return kExitOk;
}

int cmd_witness(const Options& o, Emitter& em)
{
    const auto set = load_set(o.set);
    guard_dimension(set, o.d_max);
    const auto g = single_grouping(set, o);
    const auto r = solve(set, g);
    const bool valid = r.witness && check_solution(set, g, *r.witness);
    if (em.format() == "text") {
        std::string s = g.cut_name() + " side " + g.side_name() + ": dim " + std::to_string(r.dim) + "\n";
        s += r.witness ? "witness (validated " + std::string(valid ? "yes" : "no") + "):\n" + matrix_text(*r.witness)
                       : "no witness: the solution space is trivial\n";
        em.write(s);
    } else {
        Json j{{"grouping", g.cut_name()}, {"side", g.side_name()}, {"dim", r.dim}};
        j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
        j["validated"] = valid;
        em.write(j);
    }
    return r.witness ? kExitOk : kExitNegative;
}

int cmd_tables(const Options& o, Emitter& em)
{
    const std::filesystem::path dir = o.fixtures.empty() ? default_fixture_dir() : std::filesystem::path(o.fixtures);
    std::vector<std::string> ids = {"I", "II", "III", "IV", "V"};
    if (o.table != "all") ids = {o.table};

    std::vector<TableReport> reports;
    for (const auto& id : ids) reports.push_back(reproduce_table(id, dir));

    bool ok = true;
    for (const auto& r : reports) ok = ok && r.missing.empty() && (o.allow_errata || r.errata.empty());

    if (em.format() == "json") {
        if (reports.size() == 1) {
            em.write(to_json(reports.front()));
        } else {
            Json arr = Json::array();
            for (const auto& r : reports) arr.push_back(to_json(r));
            em.write(arr);
        }
    } else if (em.format() == "csv") {
        std::string s = "table,row,status,derivation,errata\n";
        for (const auto& r : reports)
            for (const auto& row : r.rows) {
                const auto n = std::count_if(r.errata.begin(), r.errata.end(),
                                             [&](const Erratum& e) { return e.row == row.row; });
                s += r.table + "," + std::to_string(row.row) + "," + (row.matched ? "matched" : "missing") + "," +
                     row.derivation + "," + std::to_string(n) + "\n";
            }
        em.write(s);
    } else {
        std::string s;
        for (const auto& r : reports) {
            s += "table " + r.table + " (" + r.kind + ", " + r.grouping + " side " + r.side + "): " +
                 std::to_string(r.matched.size()) + "/" + std::to_string(r.rows.size()) + " rows matched, " +
                 std::to_string(r.errata.size()) + " errata, " + std::to_string(r.extra.size()) + " extra\n";
            for (const auto& e : r.errata)
                s += "  row " + std::to_string(e.row) + " " + e.kind + ": " + e.printed + " -> " +
                     (e.corrected.empty() ? "?" : e.corrected) + "\n";
            for (auto m : r.missing) s += "  row " + std::to_string(m) + " not reproduced\n";
            for (const auto& x : r.extra) s += "  extra " + x + "\n";
        }
        em.write(s);
    }
    return ok ? kExitOk : kExitNegative;
}

Json symmetry_json(const Symmetry& s)
{
    return Json{{"party_perm", s.party_perm}, {"digit_perm", s.digit_perm}};
}

int cmd_symmetry(const Options& o, Emitter& em)
{
    const auto set = load_set(o.set);
    const std::size_t n = set.party_count(), d = set.dims().front();

    if (o.search) {
        const auto found = search_symmetries(set);
        if (em.format() == "text" || em.format() == "csv") {
            std::string s = em.format() == "csv" ? "party_perm,digit_perm\n"
                                                 : set.family() + ": " + std::to_string(found.size()) +
                                                       " invariant symmetries\n";
            for (const auto& sym : found)
                s += em.format() == "csv" ? "\"" + join(sym.party_perm) + "\",\"" + join(sym.digit_perm) + "\"\n"
                                          : "  parties " + join(sym.party_perm) + "  digits " + join(sym.digit_perm) + "\n";
            em.write(s);
        } else {
            Json arr = Json::array();
            for (const auto& sym : found) arr.push_back(symmetry_json(sym));
            em.write(Json{{"family", set.family()}, {"count", found.size()}, {"invariant_symmetries", std::move(arr)}});
        }
        return kExitOk;
    }

    Symmetry sym = o.party_cycle ? Symmetry::party_cycle(n, d) : Symmetry::identity(n, d);
    if (!o.party_perm.empty()) {
        if (o.party_cycle) throw InputError("--party-cycle and --party-perm are exclusive");
        sym.party_perm = parse_perm(o.party_perm);
    }
    if (!o.digit_perm.empty()) sym.digit_perm = parse_perm(o.digit_perm);
    const bool inv = is_invariant(set, sym);
    if (em.format() == "json") {
        em.write(Json{{"family", set.family()}, {"symmetry", symmetry_json(sym)}, {"invariant", inv}});
    } else {
        em.write("parties " + join(sym.party_perm) + "  digits " + join(sym.digit_perm) + ": " +
                 (inv ? "invariant" : "not invariant") + "\n");
    }
    return inv ? kExitOk : kExitNegative;
}

int cmd_check_ortho(const Options& o, Emitter& em)
{
    const auto set = load_set(o.set);
    const auto r = verify_orthogonality(set);
    if (em.format() == "json") {
        Json v = Json::array();
        for (const auto& [a, b] : r.violations) v.push_back(Json::array({a, b}));
        em.write(Json{{"family", set.family()}, {"states", set.size()}, {"ok", r.ok}, {"violations", std::move(v)}});
    } else {
        std::string s = set.family() + ": " + std::to_string(set.size()) + " states, " +
                        (r.ok ? "pairwise orthogonal" : std::to_string(r.violations.size()) + " non-orthogonal pairs") + "\n";
        for (const auto& [a, b] : r.violations) s += "  " + a + " " + b + "\n";
        em.write(s);
    }
    return r.ok ? kExitOk : kExitNegative;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    o.jobs = default_jobs();

    CLI::App app{"Exact certification of strong nonlocality for orthogonal product-state sets", "nonloc"};
    app.require_subcommand(1);

    auto add_set = [&](CLI::App* c) { c->add_option("--set", o.set, "State set selector")->required(); };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
        c->add_option("--out", o.out, "Write output to this file");
    };
    auto add_cuts = [&](CLI::App* c) {
        c->add_option("--cuts", o.cuts, "'all' for every grouping");
        c->add_option("--cut", o.cut, "One cut, e.g. \"A|BC\"");
        c->add_option("--side", o.side, "Measuring side of --cut (default: first cell)");
    };
    auto add_solve = [&](CLI::App* c) {
        c->add_option("--jobs", o.jobs, "Groupings solved concurrently (default $NONLOC_JOBS or 1)")
            ->check(CLI::PositiveNumber);
        c->add_option("--d-max", o.d_max, "Largest local dimension accepted")->check(CLI::PositiveNumber);
        c->add_flag("--timing", o.timing, "Include elapsed_ms (output is then not reproducible)");
    };

    auto* gen = app.add_subcommand("gen", "Write a state set as JSON");
    add_set(gen);
    add_format(gen);

    auto* certify = app.add_subcommand("certify", "Decide triviality on every grouping");
    add_set(certify);
    add_cuts(certify);
    add_format(certify);
    add_solve(certify);
    certify->add_flag("--certificates", o.certificates, "Attach derivation certificates");

    auto* opspace = app.add_subcommand("opspace", "Report the operator solution space");
    add_set(opspace);
    add_cuts(opspace);
    add_format(opspace);
    add_solve(opspace);
    opspace->add_flag("--basis", o.basis, "Include the full basis");

    auto* witness = app.add_subcommand("witness", "Print a nontrivial operator for one grouping");
    add_set(witness);
    add_cuts(witness);
    add_format(witness);
    add_solve(witness);

    auto* tables = app.add_subcommand("tables", "Check the table fixtures I..V");
    tables->add_option("--id", o.table, "I, II, III, IV, V or all")
        ->check(CLI::IsMember({"I", "II", "III", "IV", "V", "all"}));
    tables->add_option("--fixtures", o.fixtures, "Fixture directory");
    tables->add_flag("--allow-errata", o.allow_errata, "Succeed when every row matches after corrections");
    add_format(tables);

    auto* symmetry = app.add_subcommand("symmetry", "Test or search party and digit symmetries");
    add_set(symmetry);
    add_format(symmetry);
    symmetry->add_flag("--party-cycle", o.party_cycle, "Party k moves to slot k+1");
    symmetry->add_option("--party-perm", o.party_perm, "Slot of each party, e.g. 1,2,0");
    symmetry->add_option("--digit-perm", o.digit_perm, "New index of each digit, e.g. 0,2,1");
    symmetry->add_flag("--search", o.search, "List every invariant symmetry");

    auto* ortho = app.add_subcommand("check-ortho", "Check pairwise orthogonality");
    add_set(ortho);
    add_format(ortho);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Emitter em(o, out);
    try {
        if (gen->parsed()) return cmd_gen(o, em);
        if (certify->parsed()) return cmd_certify(o, em, err);
        if (opspace->parsed()) return cmd_opspace(o, em);
        if (witness->parsed()) return cmd_witness(o, em);
        if (tables->parsed()) return cmd_tables(o, em);
        if (symmetry->parsed()) return cmd_symmetry(o, em);
        if (ortho->parsed()) return cmd_check_ortho(o, em);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace nonloc
