#include "gconn/serialization.hpp"

#include <cmath>

namespace gconn {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ParseError("scenario error at " + field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
    if (!j.is_object() || !j.contains(key)) fail(field + "." + key, "missing field");
    return j.at(key);
}

std::uint64_t require_u64(const Json& j, const std::string& field) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(field, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

double require_number(const Json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

std::string require_string(const Json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
}

Complex complex_from_json(const Json& j, const std::string& field) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_object()) {
        const double re = j.contains("re") ? require_number(j.at("re"), field + ".re") : 0.0;
        const double im = j.contains("im") ? require_number(j.at("im"), field + ".im") : 0.0;
        return Complex(re, im);
    }
    if (j.is_array() && j.size() == 2) {
        return Complex(require_number(j.at(0), field + "[0]"), require_number(j.at(1), field + "[1]"));
    }
    fail(field, "expected a number, {\"re\",\"im\"} object, or [re, im] pair");
}

} // namespace

GroupDescriptor group_from_json(const Json& j, const std::string& field) {
    const std::string kind = require_string(require(j, "kind", field), field + ".kind");
    if (kind == "zn") {
        const std::uint64_t n = require_u64(require(j, "n", field), field + ".n");
        if (n < 2) fail(field + ".n", "cyclic order must be >= 2");
        return GroupDescriptor::cyclic(n);
    }
    if (kind == "u1") return GroupDescriptor::circle();
    if (kind == "su2") return GroupDescriptor::special_unitary2();
    fail(field + ".kind", "unknown kind \"" + kind + "\" (expected zn, u1 or su2)");
}

Json group_to_json(const GroupDescriptor& desc) {
    Json j;
    j["kind"] = kind_name(desc.kind);
    if (desc.kind == GroupKind::CyclicZ) j["n"] = desc.order;
    return j;
}

AmbientAlphabet alphabet_from_json(const Json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object with vertices and atoms");
    std::vector<std::string> vertices;
    for (const Json& v : require(j, "vertices", field)) {
        vertices.push_back(require_string(v, field + ".vertices[]"));
    }
    std::vector<AtomSpec> atoms;
    for (const Json& a : require(j, "atoms", field)) {
        const std::string where = field + ".atoms[]";
        atoms.push_back(AtomSpec{require_string(require(a, "id", where), where + ".id"),
                                 require_string(require(a, "src", where), where + ".src"),
                                 require_string(require(a, "dst", where), where + ".dst")});
    }
    try {
        return AmbientAlphabet(std::move(vertices), atoms);
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

GroupElement element_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field) {
    try {
        switch (desc.kind) {
            case GroupKind::CyclicZ:
                return GroupElement::zn(desc.order, require_u64(j, field));
            case GroupKind::CircleU1:
                return GroupElement::u1(require_number(j, field));
            case GroupKind::SpecialUnitary2: {
                if (!j.is_array() || j.size() != 4) fail(field, "expected a quaternion [w,x,y,z]");
                return GroupElement::su2(require_number(j.at(0), field + "[0]"),
                                         require_number(j.at(1), field + "[1]"),
                                         require_number(j.at(2), field + "[2]"),
                                         require_number(j.at(3), field + "[3]"),
                                         desc.approx_tolerance);
            }
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(field, e.what());
    }
    fail(field, "unknown group kind");
}

Json element_to_json(const GroupElement& g) {
    switch (g.kind()) {
        case GroupKind::CyclicZ: return Json(g.as_zn().residue);
        case GroupKind::CircleU1: return Json(g.as_u1().angle);
        case GroupKind::SpecialUnitary2: {
            const auto& q = g.as_su2();
            return Json::array({q.w, q.x, q.y, q.z});
        }
    }
    return Json();
}

PathWord word_from_json(const AmbientAlphabet& alphabet, const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of signed atom ids");
    std::vector<Letter> letters;
    for (const Json& entry : j) {
        std::string id = require_string(entry, field + "[]");
        std::int8_t sign = +1;
        if (!id.empty() && id.front() == '~') {
            sign = -1;
            id.erase(id.begin());
        }
        const auto atom = alphabet.find_atom(id);
        if (!atom) fail(field, "unknown atom id \"" + id + "\"");
        letters.push_back(Letter{*atom, sign});
    }
    if (letters.empty()) fail(field, "a word needs at least one letter here");
    try {
        return reduce(alphabet, letters);
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

Json word_to_json(const AmbientAlphabet& alphabet, const PathWord& w) {
    Json out = Json::array();
    for (const Letter& l : w.letters) {
        const std::string& id = alphabet.atom(l.atom).id;
        out.push_back(l.sign >= 0 ? id : "~" + id);
    }
    return out;
}

Edge edge_from_json(const AmbientAlphabet& alphabet, const Json& j, const std::string& field) {
    try {
        return Edge::make(alphabet, word_from_json(alphabet, j, field));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

TameSubgroupoid subgroupoid_from_json(const AmbientAlphabet& alphabet, const Json& j,
                                      const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of edges");
    std::vector<Edge> gens;
    for (std::size_t i = 0; i < j.size(); ++i) {
        gens.push_back(edge_from_json(alphabet, j.at(i), field + "[" + std::to_string(i) + "]"));
    }
    try {
        return TameSubgroupoid::make(alphabet, std::move(gens));
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

CharLabel char_label_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field) {
    const double v = require_number(j, field);
    if (desc.kind == GroupKind::SpecialUnitary2) {
        const double twice = 2.0 * v;
        const double rounded = std::round(twice);
        if (std::abs(twice - rounded) > 1e-9 || rounded < 0) {
            fail(field, "SU(2) spin must be a half-integer >= 0");
        }
        return static_cast<CharLabel>(rounded);
    }
    if (std::abs(v - std::round(v)) > 1e-9) fail(field, "label must be an integer");
    return static_cast<CharLabel>(std::llround(v));
}

Expression expression_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an expression object");
    const std::string op = require_string(require(j, "op", field), field + ".op");
    try {
        if (op == "const") {
            return Expression::constant(complex_from_json(j, field));
        }
        if (op == "charprod") {
            std::vector<CharLabel> labels;
            const Json& raw = require(j, "labels", field);
            for (std::size_t i = 0; i < raw.size(); ++i) {
                labels.push_back(
                    char_label_from_json(desc, raw.at(i), field + ".labels[" + std::to_string(i) + "]"));
            }
            return Expression::character_product(std::move(labels));
        }
        if (op == "table") {
            if (desc.kind != GroupKind::CyclicZ) fail(field, "tables need a finite kind");
            const std::size_t arity = require_u64(require(j, "arity", field), field + ".arity");
            const Json& raw = require(j, "entries", field);
            std::vector<Complex> values;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                values.push_back(complex_from_json(raw.at(i), field + ".entries[" + std::to_string(i) + "]"));
            }
            return Expression::finite_table(desc.order, arity, std::move(values));
        }
        if (op == "matpoly") {
            const std::size_t arity = require_u64(require(j, "arity", field), field + ".arity");
            std::vector<MatPolyTerm> terms;
            for (const Json& t : require(j, "terms", field)) {
                const std::string where = field + ".terms[]";
                MatPolyTerm term;
                term.coeff = complex_from_json(require(t, "coeff", where), where + ".coeff");
                if (t.contains("vars")) {
                    for (const Json& v : t.at("vars")) {
                        const std::string vw = where + ".vars[]";
                        MatVar var;
                        var.slot = static_cast<std::uint32_t>(require_u64(require(v, "slot", vw), vw + ".slot"));
                        var.row = static_cast<std::uint8_t>(require_u64(require(v, "row", vw), vw + ".row"));
                        var.col = static_cast<std::uint8_t>(require_u64(require(v, "col", vw), vw + ".col"));
                        const std::string part = require_string(require(v, "part", vw), vw + ".part");
                        if (part != "re" && part != "im") fail(vw + ".part", "expected \"re\" or \"im\"");
                        var.imag_part = part == "im";
                        var.power = v.contains("power")
                                        ? static_cast<std::uint32_t>(require_u64(v.at("power"), vw + ".power"))
                                        : 1;
                        term.vars.push_back(var);
                    }
                }
                terms.push_back(std::move(term));
            }
            return Expression::matrix_poly(arity, std::move(terms));
        }
        if (op == "mul" || op == "add") {
            std::vector<Expression> args;
            const Json& raw = require(j, "args", field);
            for (std::size_t i = 0; i < raw.size(); ++i) {
                args.push_back(
                    expression_from_json(desc, raw.at(i), field + ".args[" + std::to_string(i) + "]"));
            }
            return op == "mul" ? Expression::product(std::move(args)) : Expression::sum(std::move(args));
        }
        if (op == "conj") {
            const Json& raw = require(j, "args", field);
            if (raw.size() != 1) fail(field + ".args", "conj takes exactly one argument");
            return Expression::conjugate(expression_from_json(desc, raw.at(0), field + ".args[0]"));
        }
        if (op == "compose") {
            const std::size_t arity = require_u64(require(j, "arity", field), field + ".arity");
            Expression inner = expression_from_json(desc, require(j, "inner", field), field + ".inner");
            std::vector<GeneratorWord> map;
            for (const Json& refs : require(j, "map", field)) {
                GeneratorWord word;
                for (const Json& r : refs) {
                    if (!r.is_array() || r.size() != 2) fail(field + ".map", "expected [slot, sign] pairs");
                    const auto slot = static_cast<std::uint32_t>(require_u64(r.at(0), field + ".map[][0]"));
                    const auto sign = static_cast<std::int8_t>(r.at(1).get<int>());
                    word.push_back(SignedRef{slot, sign});
                }
                map.push_back(std::move(word));
            }
            return Expression::compose_slots(std::move(inner), arity, std::move(map));
        }
        if (op == "slotmul") {
            Expression inner = expression_from_json(desc, require(j, "inner", field), field + ".inner");
            std::vector<GroupElement> left;
            std::vector<GroupElement> right;
            const Json& lraw = require(j, "left", field);
            const Json& rraw = require(j, "right", field);
            for (std::size_t i = 0; i < lraw.size(); ++i) {
                left.push_back(element_from_json(desc, lraw.at(i), field + ".left[" + std::to_string(i) + "]"));
            }
            for (std::size_t i = 0; i < rraw.size(); ++i) {
                right.push_back(
                    element_from_json(desc, rraw.at(i), field + ".right[" + std::to_string(i) + "]"));
            }
            return Expression::slot_multiply(std::move(inner), std::move(left), std::move(right));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(field, e.what());
    }
    fail(field + ".op", "unknown expression op \"" + op + "\"");
}

Json estimate_to_json(const IntegralEstimate& est) {
    Json j;
    j["mean"] = Json{{"re", est.mean.real()}, {"im", est.mean.imag()}};
    j["stderr"] = est.stderr_value;
    j["samples"] = est.samples;
    j["method"] = est.method == EstimateMethod::Exact ? "exact" : "mc";
    j["seed"] = est.seed;
    j["workers"] = est.workers;
    return j;
}

GaugeTransformation gauge_from_json(const AmbientAlphabet& alphabet, const GroupDescriptor& desc,
                                    const Json& j, const std::string& field) {
    if (!j.is_object()) fail(field, "expected an object {vertex: element}");
    std::map<std::uint32_t, GroupElement> values;
    for (const auto& [key, value] : j.items()) {
        const auto vertex = alphabet.find_vertex(key);
        if (!vertex) fail(field, "unknown vertex \"" + key + "\"");
        values.emplace(*vertex, element_from_json(desc, value, field + "." + key));
    }
    try {
        return make_gauge(alphabet, desc, std::move(values));
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

GroupoidAutomorphism automorphism_from_json(const AmbientAlphabet& alphabet, const Json& j,
                                            const std::string& field) {
    if (!j.is_object()) fail(field, "expected {\"vertices\": {...}, \"atoms\": {...}}");
    std::vector<std::uint32_t> vertex_map(alphabet.vertex_count());
    for (std::uint32_t v = 0; v < vertex_map.size(); ++v) vertex_map[v] = v;
    if (j.contains("vertices")) {
        for (const auto& [key, value] : j.at("vertices").items()) {
            const auto from = alphabet.find_vertex(key);
            if (!from) fail(field + ".vertices", "unknown vertex \"" + key + "\"");
            const auto to = alphabet.find_vertex(require_string(value, field + ".vertices." + key));
            if (!to) fail(field + ".vertices", "unknown image vertex for \"" + key + "\"");
            vertex_map[*from] = *to;
        }
    }
    std::vector<AtomImage> atom_map(alphabet.atom_count());
    for (std::uint32_t a = 0; a < atom_map.size(); ++a) atom_map[a] = AtomImage{a, +1};
    if (j.contains("atoms")) {
        for (const auto& [key, value] : j.at("atoms").items()) {
            const auto from = alphabet.find_atom(key);
            if (!from) fail(field + ".atoms", "unknown atom \"" + key + "\"");
            const std::string where = field + ".atoms." + key;
            const auto to = alphabet.find_atom(require_string(require(value, "to", where), where + ".to"));
            if (!to) fail(where + ".to", "unknown image atom");
            std::int8_t sign = +1;
            if (value.contains("sign")) {
                const int s = value.at("sign").get<int>();
                if (s != 1 && s != -1) fail(where + ".sign", "sign must be +1 or -1");
                sign = static_cast<std::int8_t>(s);
            }
            atom_map[*from] = AtomImage{*to, sign};
        }
    }
    try {
        return GroupoidAutomorphism::make(alphabet, std::move(vertex_map), std::move(atom_map));
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

} // namespace gconn
