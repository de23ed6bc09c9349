// birat: degree sequences, index recursions and invariants of birational
// maps of P^3, driven by built-in instances or resolved bundle files.

#include <birat/darboux.hpp>
#include <birat/emit.hpp>
#include <birat/json_io.hpp>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace birat;
using nlohmann::ordered_json;

struct Options {
    std::string instance;
    std::vector<std::string> params;
    std::string format = "md";
    std::string seed;
    std::string engine = "exact";
    int nmax = -1;  // -1: instance default
    int terms = 22;
    int max_order = 8;
    int degree = 2;
    int min_index = -1;  // -1: instance rule, 0: unconstrained
};

void diagnostic(const std::string& command, const std::string& error,
                ordered_json extra = ordered_json::object()) {
    ordered_json j;
    j["command"] = command;
    j["error"] = error;
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cerr << j.dump() << '\n';
}

std::map<std::string, Rational> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, Rational> out;
    for (const std::string& kv : kvs) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--param expects key=value, got " + kv);
        out[kv.substr(0, eq)] = Rational::parse(kv.substr(eq + 1));
    }
    return out;
}

void print_table(const TextTable& t, const Options& o, const std::string& title,
                 ordered_json meta) {
    if (o.format == "csv") {
        std::cout << to_csv(t);
    } else if (o.format == "json") {
        meta["rows"] = to_json_rows(t);
        std::cout << meta.dump(2) << '\n';
    } else {
        std::cout << "# " << title << "\n\n" << to_markdown(t);
    }
}

// ---- degrees ------------------------------------------------------------------

int run_degrees(const Options& o) {
    InstanceBundle b = load_bundle(o.instance, parse_params(o.params));
    const int nmax = o.nmax >= 0 ? o.nmax : b.default_nmax;
    const Polynomial seed =
        o.seed.empty() ? b.default_seed : parse_polynomial(o.seed, b.map.coordinates);
    const std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
    const std::string seed_text = to_string(seed, b.map.coordinates);

    ordered_json meta;
    meta["command"] = "degrees";
    meta["instance"] = b.map.name;
    meta["engine"] = o.engine;
    meta["seed"] = seed_text;
    meta["nmax"] = nmax;

    if (o.engine == "picard") {
        if (!b.picard) {
            diagnostic("degrees", "instance carries no intersection lattice");
            return 2;
        }
        print_table(degree_only_table(picard_degrees(*b.picard, nmax)), o,
                    b.map.name + " degrees, engine picard", std::move(meta));
        return 0;
    }

    if (o.engine == "affine") {
        QVec st = orbit_initial_state(b.charts, order, seed);
        std::vector<QVec> states = run_affine(b.affine, st, nmax);
        print_table(affine_table(states, b.affine.labels), o,
                    b.map.name + " degrees, engine affine, seed " + seed_text, std::move(meta));
        return 0;
    }

    OrbitTable table = run_orbit(b.map, b.charts, seed, nmax);
    if (table.truncated) {
        meta["truncated"] = true;
        meta["truncationReason"] = table.truncation_reason;
        diagnostic("degrees", "table truncated by the monomial ceiling",
                   {{"reason", table.truncation_reason},
                    {"rows", static_cast<int>(table.rows.size())}});
    }

    if (o.engine == "all") {
        std::vector<std::string> mismatches;
        QVec st = orbit_initial_state(b.charts, order, seed);
        std::vector<QVec> states = run_affine(b.affine, st, nmax);
        CrossCheck cross = cross_validate(table, states, b.affine.labels);
        mismatches = cross.mismatches;
        if (b.picard) {
            QVec pd = picard_degrees(*b.picard, nmax);
            for (const OrbitRow& row : table.rows)
                if (Rational(row.degree) != pd[row.n])
                    mismatches.push_back("degree at n=" + std::to_string(row.n) + ": exact " +
                                         std::to_string(row.degree) + " vs picard " +
                                         pd[row.n].str());
        }
        if (!mismatches.empty()) {
            ordered_json detail;
            detail["mismatches"] = mismatches;
            diagnostic("degrees", "engines disagree", std::move(detail));
            return 1;
        }
        meta["engines"] = b.picard ? ordered_json::array({"exact", "affine", "picard"})
                                   : ordered_json::array({"exact", "affine"});
        meta["agreement"] = true;
    }

    print_table(orbit_table(table), o,
                b.map.name + " degrees, engine " + o.engine + ", seed " + seed_text,
                std::move(meta));
    return 0;
}

// ---- recurrence -----------------------------------------------------------------

int run_recurrence(const Options& o) {
    InstanceBundle b = load_bundle(o.instance, parse_params(o.params));
    std::optional<LinearRecurrence> rec = instance_recurrence(b, o.terms, o.max_order);
    if (!rec) {
        diagnostic("recurrence", "no common recurrence over the seed family",
                   {{"maxOrder", o.max_order}, {"terms", o.terms}});
        return 1;
    }

    const std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
    QVec st = orbit_initial_state(b.charts, order, b.default_seed);
    std::vector<QVec> states = run_affine(b.affine, st, o.terms);
    std::vector<Rational> d;
    for (const QVec& s : states) d.push_back(s[0]);
    std::optional<ClosedForm> cf = fit_closed_form(d);

    QVec cp = rec->characteristic();
    std::reverse(cp.begin(), cp.end());  // ascending for the printer
    const size_t seeds = recurrence_seed_family(b).size();
    const size_t shown = std::min<size_t>(d.size(), 13);

    if (o.format == "json") {
        ordered_json j;
        j["command"] = "recurrence";
        j["instance"] = b.map.name;
        j["seeds"] = seeds;
        j["fittedFrom"] = 1;
        j["order"] = rec->order;
        j["coefficients"] = rational_list_json(rec->coefficients);
        j["recurrence"] = format_recurrence(*rec);
        j["characteristic"] = format_poly_in(cp, "t");
        j["degrees"] = rational_list_json(QVec(d.begin(), d.begin() + shown));
        if (cf) {
            j["closedForm"] = format_closed_form(*cf);
            j["closedFormP"] = rational_list_json(cf->p);
            j["closedFormQ"] = rational_list_json(cf->q);
            j["closedFormFrom"] = cf->first_valid;
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    TextTable t;
    t.headers = {"key", "value"};
    t.rows.push_back({"instance", b.map.name});
    t.rows.push_back({"seeds", std::to_string(seeds)});
    t.rows.push_back({"fitted from", "n = 1"});
    t.rows.push_back({"order", std::to_string(rec->order)});
    t.rows.push_back({"coefficients", format_rational_list(rec->coefficients)});
    t.rows.push_back({"recurrence", format_recurrence(*rec)});
    t.rows.push_back({"characteristic", format_poly_in(cp, "t")});
    t.rows.push_back({"degrees", format_rational_list(QVec(d.begin(), d.begin() + shown)) + ", ..."});
    if (cf) t.rows.push_back({"closed form", format_closed_form(*cf)});

    if (o.format == "csv") {
        std::cout << to_csv(t);
    } else {
        std::cout << "# " << b.map.name << " recurrence\n\n";
        for (const auto& row : t.rows) std::cout << row[0] << ": " << row[1] << '\n';
    }
    return 0;
}

// ---- darboux ------------------------------------------------------------------

int run_darboux(const Options& o) {
    InstanceBundle b = load_bundle(o.instance, parse_params(o.params));
    const int bound = o.min_index >= 0 ? o.min_index : (b.darboux_bound_is_degree ? o.degree : 1);

    ConstraintQuery query;
    query.degree = o.degree;
    if (bound > 0)
        for (const Chart& c : b.charts.charts) query.bounds.push_back({c.name, bound});
    std::vector<Polynomial> basis = constrained_space(b.charts, query);

    std::optional<ActionReport> action;
    if (!basis.empty() && !query.bounds.empty()) action = verify_darboux(b.map, basis);

    std::vector<std::string> names;
    for (size_t i = 0; i < basis.size(); ++i) names.push_back("B" + std::to_string(i + 1));

    auto action_lines = [&]() {
        std::vector<std::string> lines;
        if (!action) return lines;
        for (size_t j = 0; j < basis.size(); ++j) {
            QVec col(basis.size());
            for (size_t i = 0; i < basis.size(); ++i) col[i] = action->action[i][j];
            std::string rhs = format_class(col, names);
            std::string cleared;
            for (size_t k = 0; k < b.map.critical_factors.size(); ++k) {
                int e = action->exponents[j][k];
                if (!e) continue;
                if (!cleared.empty()) cleared += " * ";
                cleared += "(" + to_string(b.map.critical_factors[k], b.map.coordinates) + ")";
                if (e > 1) cleared += "^" + std::to_string(e);
            }
            std::string line = "f* " + names[j] + " = " + rhs;
            if (!cleared.empty()) line += "   [cleared " + cleared + "]";
            lines.push_back(std::move(line));
        }
        return lines;
    };

    if (o.format == "json") {
        ordered_json j;
        j["command"] = "darboux";
        j["instance"] = b.map.name;
        j["degree"] = o.degree;
        j["minIndex"] = bound;
        j["dimension"] = basis.size();
        ordered_json bj = ordered_json::array();
        for (const Polynomial& p : basis) bj.push_back(to_string(p, b.map.coordinates));
        j["basis"] = std::move(bj);
        if (action) {
            j["closed"] = action->closed;
            ordered_json rows = ordered_json::array();
            for (const QVec& r : action->action) rows.push_back(rational_list_json(r));
            j["action"] = std::move(rows);
            j["pullbacks"] = action_lines();
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (o.format == "csv") {
        TextTable t;
        t.headers = {"element", "polynomial"};
        for (size_t i = 0; i < basis.size(); ++i)
            t.rows.push_back({names[i], to_string(basis[i], b.map.coordinates)});
        std::cout << to_csv(t);
        return 0;
    }

    std::cout << "# " << b.map.name << " darboux, degree " << o.degree << ", min index " << bound
              << "\n\ndimension: " << basis.size() << '\n';
    for (size_t i = 0; i < basis.size(); ++i)
        std::cout << "  " << names[i] << " = " << to_string(basis[i], b.map.coordinates) << '\n';
    if (action) {
        std::cout << "closed under proper pull-back: " << (action->closed ? "yes" : "no") << '\n';
        for (const std::string& line : action_lines()) std::cout << "  " << line << '\n';
        for (const Polynomial& esc : action->escapes)
            std::cout << "  escapes to " << to_string(esc, b.map.coordinates) << '\n';
    }
    return 0;
}

// ---- picard -------------------------------------------------------------------

int run_picard(const Options& o) {
    InstanceBundle b = load_bundle(o.instance, parse_params(o.params));
    if (!b.picard) {
        diagnostic("picard", "instance carries no intersection lattice");
        return 2;
    }
    const int nmax = o.nmax >= 0 ? o.nmax : b.default_nmax;
    QVec degrees = picard_degrees(*b.picard, nmax);
    std::vector<QVec> classes = invariant_classes(*b.picard);

    if (o.format == "json") {
        ordered_json j;
        j["command"] = "picard";
        j["instance"] = b.map.name;
        j["rank"] = b.picard->basis.size();
        j["nmax"] = nmax;
        j["degrees"] = rational_list_json(degrees);
        ordered_json cj = ordered_json::array();
        for (const QVec& v : classes) cj.push_back(format_class(v, b.picard->basis));
        j["invariantClasses"] = std::move(cj);
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    if (o.format == "csv") {
        std::cout << to_csv(degree_only_table(degrees));
        return 0;
    }
    std::cout << "# " << b.map.name << " picard, rank " << b.picard->basis.size() << "\n\n"
              << to_markdown(degree_only_table(degrees)) << "\ninvariant classes:\n";
    for (const QVec& v : classes) std::cout << "  " << format_class(v, b.picard->basis) << '\n';
    return 0;
}

// ---- validate -----------------------------------------------------------------

struct CheckRow {
    std::string name, result, detail;
};

int run_validate(const Options& o) {
    InstanceBundle b = load_bundle(o.instance, parse_params(o.params));
    const int nmax = o.nmax >= 0 ? o.nmax : b.default_nmax;
    const std::vector<std::string>& coords = b.map.coordinates;
    std::vector<CheckRow> checks;
    bool all_ok = true;
    auto add = [&checks, &all_ok](std::string name, bool ok, std::string detail,
                                  bool skipped = false) {
        checks.push_back({std::move(name), skipped ? "skipped" : ok ? "pass" : "FAIL",
                          std::move(detail)});
        all_ok = all_ok && ok;
    };

    CriticalReport rep = validate_critical_factors(b.map);
    {
        std::string detail = rep.jacobian_unit.str();
        Polynomial mono = Polynomial::monomial(4, rep.jacobian_monomial, Rational(1));
        if (mono.degree() > 0) detail += " * " + to_string(mono, coords);
        for (const FactorInfo& fi : rep.factors) {
            detail += " * (" + to_string(fi.factor, coords) + ")";
            if (fi.jacobian_multiplicity != 1)
                detail += "^" + std::to_string(fi.jacobian_multiplicity);
        }
        add("jacobian-factorization", rep.jacobian_accounted, "J = " + detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (const FactorInfo& fi : rep.factors) {
            if (fi.image_dimension < 0) continue;
            ok = ok && fi.image_dimension <= 1;
            if (!detail.empty()) detail += "; ";
            detail += to_string(fi.factor, coords) + " -> dim " +
                      std::to_string(fi.image_dimension);
        }
        add("contracted-images", ok, detail.empty() ? "no linear factors" : detail);
    }
    if (rep.inverse_checked)
        add("inverse-consistency", rep.inverse_consistent,
            "(f_inv o f) = id * " + to_string(rep.inverse_factor, coords));
    else
        add("inverse-consistency", true, "no inverse supplied", true);

    {
        bool ok = true;
        std::string bad;
        const std::vector<Polynomial> uvw{Polynomial::variable(3, 0), Polynomial::variable(3, 1),
                                          Polynomial::variable(3, 2)};
        for (const Chart& c : b.charts.charts) {
            try {
                for (int i = 0; i < 3; ++i)
                    if (c.has_inverse() &&
                        c.inverse[i].substitute(c.param) != RationalFunction::from_poly(uvw[i]))
                        throw std::domain_error("round-trip mismatch");
            } catch (const std::exception&) {
                ok = false;
                bad += (bad.empty() ? "" : ", ") + c.name;
            }
        }
        add("chart-towers", ok,
            ok ? std::to_string(b.charts.charts.size()) + " towers, inverses round-trip"
               : "failing: " + bad);
    }

    if (b.transfers.empty()) {
        add("exceptional-orbit", true, "none declared", true);
    } else {
        bool ok = true;
        std::string detail;
        for (const TransferResult& r : run_transfers(b)) {
            ok = ok && r.ok;
            if (!detail.empty()) detail += "; ";
            detail += r.source + " -> " + r.target;
            detail += r.ok ? " (mult " + std::to_string(r.check.target_valuation) + ")"
                           : " FAILS";
        }
        add("exceptional-orbit", ok, detail);
    }

    OrbitTable table = run_orbit(b.map, b.charts, b.default_seed, nmax);
    if (table.truncated)
        add("orbit", false, "truncated: " + table.truncation_reason);
    {
        bool ok = true;
        std::vector<int> factor_col(b.factor_charts.size(), -1);
        for (size_t i = 0; i < b.factor_charts.size(); ++i)
            for (size_t c = 0; c < table.chart_names.size(); ++c)
                if (table.chart_names[c] == b.factor_charts[i]) factor_col[i] = static_cast<int>(c);
        for (size_t n = 0; n < table.pull_exponents.size(); ++n)
            for (size_t i = 0; i < b.factor_charts.size(); ++i) {
                int expected = factor_col[i] < 0 ? 0 : table.rows[n].indices[factor_col[i]];
                ok = ok && table.pull_exponents[n][i] == expected;
            }
        add("factor-exponents", ok,
            "pull-back exponents match chart indices for n <= " +
                std::to_string(table.pull_exponents.size()));
    }
    {
        const std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        QVec st = orbit_initial_state(b.charts, order, b.default_seed);
        std::vector<QVec> states = run_affine(b.affine, st, nmax);
        CrossCheck cross = cross_validate(table, states, b.affine.labels, b.alpha_chart);
        std::string detail = "agree for n <= " + std::to_string(table.rows.back().n);
        bool ok = cross.ok;
        if (b.alpha_chart) {
            ok = ok && cross.alpha_constant_tail;
            detail += cross.alpha_constant_tail
                          ? "; d - nu_" + *b.alpha_chart + " = " + cross.alpha[1].str() +
                                " from n = 1"
                          : "; alpha drifts";
        }
        if (!cross.ok) detail = cross.mismatches.front();
        add("orbit-vs-affine", ok, detail);
    }
    if (b.picard) {
        QVec pd = picard_degrees(*b.picard, nmax);
        bool ok = true;
        for (const OrbitRow& row : table.rows) ok = ok && Rational(row.degree) == pd[row.n];
        add("picard-degrees", ok,
            "lattice degrees match exact degrees for n <= " +
                std::to_string(table.rows.back().n));
    }
    if (b.map.name == "khk-euler" && b.parameters.count("gamma")) {
        bool ok = identity_suite_ok(b.map, b.parameters.at("gamma"));
        add("structural-identities", ok, "plane and quadric pull-back identities");
    }

    TextTable t;
    t.headers = {"check", "result", "detail"};
    for (const CheckRow& c : checks) t.rows.push_back({c.name, c.result, c.detail});

    if (o.format == "json") {
        ordered_json j;
        j["command"] = "validate";
        j["instance"] = b.map.name;
        j["nmax"] = nmax;
        j["checks"] = to_json_rows(t);
        j["overall"] = all_ok ? "pass" : "fail";
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << to_csv(t);
    } else {
        std::cout << "# " << b.map.name << " validate\n\n"
                  << to_markdown(t) << "\noverall: " << (all_ok ? "pass" : "fail") << '\n';
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("BIRAT_MONOMIAL_LIMIT")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (!end || *end != '\0' || v == 0) {
            diagnostic("birat", "BIRAT_MONOMIAL_LIMIT must be a positive integer");
            return 2;
        }
        birat::term_limit() = static_cast<size_t>(v);
    }

    CLI::App app{"exact degree sequences and invariants of birational maps of P^3"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("instance", o.instance,
                        "built-in instance (khk-euler, dp1-ercolani, inflated-qrt) or a "
                        "bundle .json path")
            ->required();
        cmd->add_option("--param", o.params, "override a map parameter, key=value; repeatable "
                                             "(built-in instances only)");
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"md", "csv", "json"}))
            ->capture_default_str();
    };

    CLI::App* degrees =
        app.add_subcommand("degrees", "degree and index table of the iterated pull-backs");
    add_common(degrees);
    degrees->add_option("--nmax", o.nmax, "last iterate (default: instance setting)");
    degrees->add_option("--seed", o.seed, "seed polynomial (default: instance setting)");
    degrees->add_option("--engine", o.engine,
                        "exact pull-backs, the affine index recursion, the intersection "
                        "lattice, or all of them cross-checked")
        ->check(CLI::IsMember({"exact", "affine", "picard", "all"}))
        ->capture_default_str();

    CLI::App* recurrence =
        app.add_subcommand("recurrence", "linear recurrence fitted to the degree sequences");
    add_common(recurrence);
    recurrence->add_option("--terms", o.terms, "length of each fitted sequence")
        ->capture_default_str();
    recurrence->add_option("--max-order", o.max_order, "largest order tried")
        ->capture_default_str();

    CLI::App* darboux = app.add_subcommand(
        "darboux", "forms of a given degree meeting index bounds at every chart");
    add_common(darboux);
    darboux->add_option("--degree", o.degree, "degree of the forms")->capture_default_str();
    darboux->add_option("--min-index", o.min_index,
                        "index bound at every chart (default: instance rule; 0 drops the "
                        "constraints)");

    CLI::App* picard = app.add_subcommand(
        "picard", "degrees and invariant classes from the intersection lattice");
    add_common(picard);
    picard->add_option("--nmax", o.nmax, "last iterate (default: instance setting)");

    CLI::App* validate =
        app.add_subcommand("validate", "structural checks of an instance bundle");
    add_common(validate);
    validate->add_option("--nmax", o.nmax, "orbit length used by the checks");

    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "degrees") return run_degrees(o);
        if (cmd == "recurrence") return run_recurrence(o);
        if (cmd == "darboux") return run_darboux(o);
        if (cmd == "picard") return run_picard(o);
        return run_validate(o);
    } catch (const birat::ResourceLimitError& e) {
        diagnostic(cmd, e.what(), {{"hint", "raise BIRAT_MONOMIAL_LIMIT"}});
        return 2;
    } catch (const std::exception& e) {
        diagnostic(cmd, e.what());
        return 2;
    }
}
