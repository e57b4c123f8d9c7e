#include "gconn/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

namespace gconn {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ParseError("scenario error at " + field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
    if (!j.is_object() || !j.contains(key)) fail(field + "." + key, "missing field");
    return j.at(key);
}

/// Everything a command handler needs, parsed once.
struct Context {
    Json scenario;
    GroupDescriptor group;
    std::optional<AmbientAlphabet> alphabet;
    std::map<std::string, TameSubgroupoid> named_subgroupoids;
    std::uint64_t effective_seed = 0;
    unsigned effective_workers = 0;

    const AmbientAlphabet& need_alphabet() const {
        if (!alphabet) fail("alphabet", "this command needs an alphabet");
        return *alphabet;
    }
};

/// A subgroupoid reference: a name from "subgroupoids" or an inline edge list.
TameSubgroupoid resolve_subgroupoid(const Context& ctx, const Json& j, const std::string& field) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        const auto it = ctx.named_subgroupoids.find(name);
        if (it == ctx.named_subgroupoids.end()) {
            fail(field, "unknown subgroupoid name \"" + name + "\"");
        }
        return it->second;
    }
    return subgroupoid_from_json(ctx.need_alphabet(), j, field);
}

std::string subgroupoid_display(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

Method method_from_scenario(const Context& ctx, const RunOverrides& overrides) {
    Json m = ctx.scenario.contains("method") ? ctx.scenario.at("method") : Json{{"type", "exact"}};
    if (!m.is_object() || !m.contains("type")) fail("method.type", "missing field");
    const std::string type = m.at("type").get<std::string>();
    if (type == "exact") return ExactTag{};
    if (type != "mc") fail("method.type", "unknown method \"" + type + "\" (expected exact or mc)");
    McParams mc;
    mc.samples = m.contains("samples") ? m.at("samples").get<std::uint64_t>() : 100000;
    mc.seed = m.contains("seed") ? m.at("seed").get<std::uint64_t>() : 0;
    mc.workers = m.contains("workers") ? m.at("workers").get<unsigned>() : 1;
    if (overrides.samples) mc.samples = *overrides.samples;
    if (overrides.seed) mc.seed = *overrides.seed;
    if (overrides.workers) mc.workers = *overrides.workers;
    if (mc.samples == 0) fail("method.samples", "must be positive");
    if (mc.workers == 0) fail("method.workers", "must be positive");
    return mc;
}

MeasureSpec measure_from_scenario(const Context& ctx) {
    if (!ctx.scenario.contains("measure")) return UniformMeasure{};
    const Json& m = ctx.scenario.at("measure");
    const std::string type = m.contains("type") ? m.at("type").get<std::string>() : "uniform";
    if (type == "uniform") return UniformMeasure{};
    if (type != "finite_family") {
        fail("measure.type", "unknown measure \"" + type + "\" (expected uniform or finite_family)");
    }
    std::vector<std::pair<TameSubgroupoid, std::vector<double>>> tables;
    if (!m.contains("tables")) fail("measure.tables", "missing field");
    for (const Json& t : m.at("tables")) {
        TameSubgroupoid label = resolve_subgroupoid(ctx, t.at("label"), "measure.tables[].label");
        std::vector<double> weights;
        for (const Json& w : t.at("weights")) weights.push_back(w.get<double>());
        tables.emplace_back(std::move(label), std::move(weights));
    }
    try {
        return make_finite_family(ctx.group, std::move(tables));
    } catch (const Error& e) {
        fail("measure.tables", e.what());
    }
}

CylFunction function_from_scenario(const Context& ctx, const Json& j, const std::string& field) {
    TameSubgroupoid label = resolve_subgroupoid(ctx, require(j, "label", field), field + ".label");
    Expression expr = expression_from_json(ctx.group, require(j, "expr", field), field + ".expr");
    try {
        return make_cyl(std::move(label), std::move(expr));
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

// ---- commands --------------------------------------------------------------

int cmd_integrate(Context& ctx, const RunOverrides& overrides, Json& results) {
    const CylFunction f =
        function_from_scenario(ctx, require(ctx.scenario, "function", "scenario"), "function");
    const MeasureSpec measure = measure_from_scenario(ctx);
    const Method method = method_from_scenario(ctx, overrides);
    const IntegralEstimate est = integrate(ctx.group, f, measure, method);
    if (const auto* mc = std::get_if<McParams>(&method)) {
        ctx.effective_seed = mc->seed;
        ctx.effective_workers = mc->workers;
    }
    results.push_back(Json{{"name", "integral"}, {"estimate", estimate_to_json(est)}, {"pass", true}});
    return 0;
}

int cmd_consistency(Context& ctx, const RunOverrides& overrides, Json& results) {
    const MeasureSpec measure = measure_from_scenario(ctx);
    const Method method = method_from_scenario(ctx, overrides);
    McParams mc{1000000, 0, 1};
    if (const auto* p = std::get_if<McParams>(&method)) {
        mc = *p;
        ctx.effective_seed = p->seed;
        ctx.effective_workers = p->workers;
    }
    std::vector<std::vector<CharLabel>> battery;
    if (ctx.scenario.contains("battery")) {
        for (const Json& entry : ctx.scenario.at("battery")) {
            std::vector<CharLabel> labels;
            for (const Json& l : entry) labels.push_back(char_label_from_json(ctx.group, l, "battery[][]"));
            battery.push_back(std::move(labels));
        }
    }
    const Json& pairs = require(ctx.scenario, "pairs", "scenario");
    if (!pairs.is_array() || pairs.empty()) fail("pairs", "expected a nonempty array of [coarse, fine]");
    bool all_pass = true;
    for (const Json& pair : pairs) {
        if (!pair.is_array() || pair.size() != 2) fail("pairs[]", "expected [coarse, fine]");
        const TameSubgroupoid coarse = resolve_subgroupoid(ctx, pair.at(0), "pairs[][0]");
        const TameSubgroupoid fine = resolve_subgroupoid(ctx, pair.at(1), "pairs[][1]");
        ConsistencyReport report;
        try {
            report = check_consistency(ctx.group, measure, coarse, fine, battery, mc);
        } catch (const NotComparable&) {
            fail("pairs", "subgroupoids " + subgroupoid_display(pair.at(0)) + " and " +
                              subgroupoid_display(pair.at(1)) + " are not nested");
        }
        all_pass = all_pass && report.pass;
        Json checks = Json::array();
        for (const ConsistencyCheck& c : report.checks) {
            checks.push_back(Json{{"what", c.what},
                                  {"discrepancy", c.discrepancy},
                                  {"tolerance", c.tolerance},
                                  {"pass", c.pass}});
        }
        results.push_back(Json{{"name", "consistency"},
                               {"pair", Json::array({subgroupoid_display(pair.at(0)),
                                                     subgroupoid_display(pair.at(1))})},
                               {"pass", report.pass},
                               {"max_discrepancy", report.max_discrepancy},
                               {"checks", checks}});
    }
    return all_pass ? 0 : 1;
}

int cmd_invariance(Context& ctx, const RunOverrides& overrides, Json& results) {
    const CylFunction f =
        function_from_scenario(ctx, require(ctx.scenario, "function", "scenario"), "function");
    const bool has_gauge = ctx.scenario.contains("gauge");
    const bool has_auto = ctx.scenario.contains("automorphism");
    if (has_gauge == has_auto) {
        fail("scenario", "invariance needs exactly one of \"gauge\" or \"automorphism\"");
    }
    Transformation transform =
        has_gauge ? Transformation(gauge_from_json(ctx.need_alphabet(), ctx.group,
                                                   ctx.scenario.at("gauge"), "gauge"))
                  : Transformation(automorphism_from_json(ctx.need_alphabet(),
                                                          ctx.scenario.at("automorphism"), "automorphism"));
    const Method method = method_from_scenario(ctx, overrides);
    if (const auto* mc = std::get_if<McParams>(&method)) {
        ctx.effective_seed = mc->seed;
        ctx.effective_workers = mc->workers;
    }
    const InvarianceReport report =
        invariance_report(ctx.group, ctx.need_alphabet(), f, transform, method);
    results.push_back(Json{{"name", "invariance"},
                           {"transformation", has_gauge ? "gauge" : "automorphism"},
                           {"lhs", estimate_to_json(report.lhs)},
                           {"rhs", estimate_to_json(report.rhs)},
                           {"discrepancy", report.discrepancy},
                           {"tolerance", report.tolerance},
                           {"pass", report.pass}});
    return report.pass ? 0 : 1;
}

int cmd_gram(Context& ctx, const RunOverrides& overrides, Json& results) {
    std::vector<SpinNetworkFunction> funcs;
    Json specs = Json::array();
    if (ctx.scenario.contains("spin_networks")) {
        specs = ctx.scenario.at("spin_networks");
    } else if (ctx.scenario.contains("spin_network")) {
        specs.push_back(ctx.scenario.at("spin_network"));
    } else {
        fail("spin_networks", "missing field");
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string field = "spin_networks[" + std::to_string(i) + "]";
        const Json& spec = specs.at(i);
        TameSubgroupoid label = resolve_subgroupoid(ctx, require(spec, "edges", field), field + ".edges");
        std::vector<CharLabel> labels;
        const Json& raw = require(spec, "labels", field);
        for (std::size_t k = 0; k < raw.size(); ++k) {
            labels.push_back(char_label_from_json(ctx.group, raw.at(k),
                                                  field + ".labels[" + std::to_string(k) + "]"));
        }
        try {
            funcs.push_back(make_spin_network(ctx.group, std::move(label), std::move(labels)));
        } catch (const Error& e) {
            fail(field, e.what());
        }
    }
    const Method method = method_from_scenario(ctx, overrides);
    if (const auto* mc = std::get_if<McParams>(&method)) {
        ctx.effective_seed = mc->seed;
        ctx.effective_workers = mc->workers;
    }
    const GramMatrix gram = gram_matrix(ctx.group, ctx.need_alphabet(), funcs, method);
    Json rows = Json::array();
    for (std::size_t i = 0; i < gram.size; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < gram.size; ++j) row.push_back(estimate_to_json(gram.at(i, j)));
        rows.push_back(std::move(row));
    }
    results.push_back(Json{{"name", "gram"}, {"size", gram.size}, {"entries", rows}, {"pass", true}});
    return 0;
}

int cmd_reconstruct(Context& ctx, Json& results) {
    const Json& raw = require(ctx.scenario, "charts", "scenario");
    if (!raw.is_array() || raw.empty()) fail("charts", "expected a nonempty array");
    std::vector<Chart> charts;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string field = "charts[" + std::to_string(i) + "]";
        const Json& c = raw.at(i);
        TameSubgroupoid label = resolve_subgroupoid(ctx, require(c, "label", field), field + ".label");
        std::vector<GroupElement> values;
        const Json& vs = require(c, "values", field);
        for (std::size_t k = 0; k < vs.size(); ++k) {
            values.push_back(element_from_json(ctx.group, vs.at(k),
                                               field + ".values[" + std::to_string(k) + "]"));
        }
        try {
            charts.push_back(make_chart(ctx.group, std::move(label), std::move(values)));
        } catch (const Error& e) {
            fail(field, e.what());
        }
        names.push_back(subgroupoid_display(c.at("label")));
    }
    ReconstructionResult result;
    try {
        result = reconstruct_from_family(ctx.need_alphabet(), charts, ctx.group.approx_tolerance);
    } catch (const MissingTop& e) {
        fail("charts", e.what());
    }
    if (result.consistent()) {
        Json values = Json::array();
        for (const GroupElement& g : result.connection->values) values.push_back(element_to_json(g));
        Json atoms = Json::array();
        for (std::uint32_t a = 0; a < ctx.need_alphabet().atom_count(); ++a) {
            atoms.push_back(ctx.need_alphabet().atom(a).id);
        }
        results.push_back(Json{{"name", "reconstruct"},
                               {"consistent", true},
                               {"atoms", atoms},
                               {"connection", values},
                               {"pass", true}});
        return 0;
    }
    results.push_back(Json{{"name", "reconstruct"},
                           {"consistent", false},
                           {"violating_pair", Json::array({names[result.violation->first],
                                                           names[result.violation->second]})},
                           {"pass", false}});
    return 1;
}

} // namespace

RunOutcome run_scenario(const Json& scenario, const RunOverrides& overrides) {
    const auto start = std::chrono::steady_clock::now();
    if (!scenario.is_object()) fail("scenario", "expected a JSON object");
    if (!scenario.contains("schema")) fail("schema", "missing field");
    if (!scenario.at("schema").is_number_integer() || scenario.at("schema").get<int>() != 1) {
        fail("schema", "unsupported schema version (expected 1)");
    }
    const std::string command = require(scenario, "command", "scenario").get<std::string>();

    Context ctx;
    ctx.scenario = scenario;
    ctx.group = group_from_json(require(scenario, "group", "scenario"), "group");
    if (scenario.contains("alphabet")) {
        ctx.alphabet = alphabet_from_json(scenario.at("alphabet"), "alphabet");
    }
    if (scenario.contains("subgroupoids")) {
        const Json& subs = scenario.at("subgroupoids");
        if (!subs.is_object()) fail("subgroupoids", "expected an object of name -> edge list");
        for (const auto& [name, edges] : subs.items()) {
            ctx.named_subgroupoids.emplace(
                name, subgroupoid_from_json(ctx.need_alphabet(), edges, "subgroupoids." + name));
        }
    }

    Json results = Json::array();
    int code = 0;
    if (command == "integrate") {
        code = cmd_integrate(ctx, overrides, results);
    } else if (command == "consistency") {
        code = cmd_consistency(ctx, overrides, results);
    } else if (command == "invariance") {
        code = cmd_invariance(ctx, overrides, results);
    } else if (command == "gram") {
        code = cmd_gram(ctx, overrides, results);
    } else if (command == "reconstruct") {
        code = cmd_reconstruct(ctx, results);
    } else {
        fail("command", "unknown command \"" + command +
                            "\" (expected integrate, consistency, invariance, gram or reconstruct)");
    }

    Json report;
    report["schema"] = 1;
    report["command"] = command;
    report["seed"] = ctx.effective_seed;
    report["workers"] = ctx.effective_workers;
    report["pass"] = code == 0;
    report["results"] = results;
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    report["wall_time_seconds"] = elapsed.count();

    std::optional<std::string> out_path;
    if (overrides.out_path) {
        out_path = *overrides.out_path;
    } else if (scenario.contains("out")) {
        out_path = scenario.at("out").get<std::string>();
    }
    return RunOutcome{code, std::move(report), std::move(out_path)};
}

RunOutcome run_scenario_file(const std::string& path, const RunOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file \"" + path + "\"");
    Json scenario;
    try {
        scenario = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError("scenario file \"" + path + "\" is not valid JSON: " + e.what());
    }
    return run_scenario(scenario, overrides);
}

void write_report_atomically(const Json& report, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write report file \"" + tmp + "\"");
        out << report.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

} // namespace gconn
