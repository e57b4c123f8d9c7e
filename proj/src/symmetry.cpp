#include "gconn/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gconn {

GaugeTransformation make_gauge(const AmbientAlphabet& alphabet, const GroupDescriptor& group,
                               std::map<std::uint32_t, GroupElement> values) {
    for (const auto& [vertex, g] : values) {
        if (vertex >= alphabet.vertex_count()) {
            throw AlphabetMismatch("gauge transformation references vertex index out of range");
        }
        if (!(descriptor_of(g) == group)) {
            throw KindMismatch("gauge value kind does not match the declared group");
        }
    }
    return GaugeTransformation{group, std::move(values)};
}

GroupElement gauge_value(const GaugeTransformation& gauge, std::uint32_t vertex) {
    const auto it = gauge.values.find(vertex);
    return it == gauge.values.end() ? identity(gauge.group) : it->second;
}

GaugeTransformation compose_gauges(const GaugeTransformation& h, const GaugeTransformation& g) {
    if (!(h.group == g.group)) throw KindMismatch("gauge transformations live in different groups");
    GaugeTransformation out{h.group, h.values};
    for (const auto& [vertex, value] : g.values) {
        const auto it = out.values.find(vertex);
        if (it == out.values.end()) {
            out.values.emplace(vertex, value);
        } else {
            it->second = compose(it->second, value);
        }
    }
    return out;
}

GroupoidAutomorphism GroupoidAutomorphism::make(const AmbientAlphabet& alphabet,
                                                std::vector<std::uint32_t> vertex_map,
                                                std::vector<AtomImage> atom_map) {
    const std::size_t nv = alphabet.vertex_count();
    const std::size_t na = alphabet.atom_count();
    if (vertex_map.size() != nv) throw AlphabetMismatch("vertex map must cover every vertex");
    if (atom_map.size() != na) throw AlphabetMismatch("atom map must cover every atom");
    std::vector<bool> vertex_hit(nv, false);
    for (const std::uint32_t v : vertex_map) {
        if (v >= nv || vertex_hit[v]) throw AlphabetMismatch("vertex map is not a bijection");
        vertex_hit[v] = true;
    }
    std::vector<bool> atom_hit(na, false);
    for (const AtomImage& img : atom_map) {
        if (img.to >= na || atom_hit[img.to]) throw AlphabetMismatch("atom map is not a bijection");
        if (img.sign != 1 && img.sign != -1) throw AlphabetMismatch("atom image sign must be +1 or -1");
        atom_hit[img.to] = true;
    }
    for (std::uint32_t a = 0; a < na; ++a) {
        const Atom& from = alphabet.atom(a);
        const Atom& to = alphabet.atom(atom_map[a].to);
        const std::uint32_t src_image = vertex_map[from.src];
        const std::uint32_t dst_image = vertex_map[from.dst];
        const bool forward = atom_map[a].sign > 0;
        const std::uint32_t want_src = forward ? src_image : dst_image;
        const std::uint32_t want_dst = forward ? dst_image : src_image;
        if (to.src != want_src || to.dst != want_dst) {
            throw AlphabetMismatch("atom \"" + from.id + "\" image \"" + to.id +
                                   "\" does not preserve incidence");
        }
    }
    return GroupoidAutomorphism(std::move(vertex_map), std::move(atom_map));
}

GroupoidAutomorphism GroupoidAutomorphism::identity_map(const AmbientAlphabet& alphabet) {
    std::vector<std::uint32_t> vm(alphabet.vertex_count());
    for (std::uint32_t v = 0; v < vm.size(); ++v) vm[v] = v;
    std::vector<AtomImage> am(alphabet.atom_count());
    for (std::uint32_t a = 0; a < am.size(); ++a) am[a] = AtomImage{a, +1};
    return GroupoidAutomorphism(std::move(vm), std::move(am));
}

GroupoidAutomorphism GroupoidAutomorphism::inverse(const AmbientAlphabet& alphabet) const {
    std::vector<std::uint32_t> vm(vertex_map_.size());
    for (std::uint32_t v = 0; v < vertex_map_.size(); ++v) vm[vertex_map_[v]] = v;
    std::vector<AtomImage> am(atom_map_.size());
    for (std::uint32_t a = 0; a < atom_map_.size(); ++a) {
        am[atom_map_[a].to] = AtomImage{a, atom_map_[a].sign};
    }
    return make(alphabet, std::move(vm), std::move(am));
}

GroupoidAutomorphism compose_automorphisms(const AmbientAlphabet& alphabet,
                                           const GroupoidAutomorphism& f, const GroupoidAutomorphism& g) {
    std::vector<std::uint32_t> vm(g.vertex_map().size());
    for (std::uint32_t v = 0; v < vm.size(); ++v) vm[v] = f.vertex_map()[g.vertex_map()[v]];
    std::vector<AtomImage> am(g.atom_map().size());
    for (std::uint32_t a = 0; a < am.size(); ++a) {
        const AtomImage first = g.atom_map()[a];
        const AtomImage second = f.atom_map()[first.to];
        am[a] = AtomImage{second.to, static_cast<std::int8_t>(first.sign * second.sign)};
    }
    return GroupoidAutomorphism::make(alphabet, std::move(vm), std::move(am));
}

PathWord apply_to_word(const GroupoidAutomorphism& f, const PathWord& w,
                       const AmbientAlphabet& alphabet) {
    std::vector<Letter> letters;
    letters.reserve(w.letters.size());
    for (const Letter& l : w.letters) {
        const AtomImage img = f.atom_map()[l.atom];
        letters.push_back(Letter{img.to, static_cast<std::int8_t>(l.sign * img.sign)});
    }
    const std::uint32_t base = f.vertex_map()[w.base];
    return reduce(alphabet, letters, base);
}

Edge apply_to_edge(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f, const Edge& e) {
    return Edge::make(alphabet, apply_to_word(f, e.word(), alphabet));
}

TameSubgroupoid apply_to_subgroupoid(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f,
                                     const TameSubgroupoid& label) {
    std::vector<Edge> gens;
    gens.reserve(label.size());
    for (const Edge& e : label.generators()) gens.push_back(apply_to_edge(alphabet, f, e));
    return TameSubgroupoid::make(alphabet, std::move(gens));
}

AmbientConnection gauge_act(const AmbientAlphabet& alphabet, const GaugeTransformation& gauge,
                            const AmbientConnection& conn) {
    if (!(gauge.group == conn.group)) {
        throw KindMismatch("gauge transformation and connection live in different groups");
    }
    if (conn.values.size() != alphabet.atom_count()) {
        throw AlphabetMismatch("connection does not match the alphabet");
    }
    std::vector<GroupElement> values;
    values.reserve(conn.values.size());
    for (std::uint32_t a = 0; a < conn.values.size(); ++a) {
        const Atom& atom = alphabet.atom(a);
        values.push_back(compose(compose(gauge_value(gauge, atom.dst), conn.values[a]),
                                 invert(gauge_value(gauge, atom.src))));
    }
    return AmbientConnection{conn.group, std::move(values)};
}

AmbientConnection automorphism_act(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f,
                                   const AmbientConnection& conn) {
    if (conn.values.size() != alphabet.atom_count() ||
        f.atom_map().size() != alphabet.atom_count()) {
        throw AlphabetMismatch("automorphism and connection must share the alphabet");
    }
    // (F A)([a+]) = A(F^{-1}[a+]) = A([b^sign]) where F maps b to a^sign
    std::vector<GroupElement> values(conn.values.size(), identity(conn.group));
    for (std::uint32_t b = 0; b < conn.values.size(); ++b) {
        const AtomImage img = f.atom_map()[b];
        values[img.to] = signed_power(conn.values[b], img.sign);
    }
    return AmbientConnection{conn.group, std::move(values)};
}

CylFunction act_on_function(const AmbientAlphabet& alphabet, const Transformation& transform,
                            const CylFunction& f) {
    if (const auto* gauge = std::get_if<GaugeTransformation>(&transform)) {
        std::vector<GroupElement> left;
        std::vector<GroupElement> right;
        left.reserve(f.label.size());
        right.reserve(f.label.size());
        for (const Edge& e : f.label.generators()) {
            left.push_back(invert(gauge_value(*gauge, word_range(alphabet, e.word()))));
            right.push_back(gauge_value(*gauge, word_source(alphabet, e.word())));
        }
        return CylFunction{f.label,
                           Expression::slot_multiply(f.expr, std::move(left), std::move(right))};
    }
    const auto& f_auto = std::get<GroupoidAutomorphism>(transform);
    return CylFunction{apply_to_subgroupoid(alphabet, f_auto, f.label), f.expr};
}

InvarianceReport invariance_report(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                                   const CylFunction& f, const Transformation& transform,
                                   const Method& method) {
    const CylFunction acted = act_on_function(alphabet, transform, f);
    Method lhs_method = method;
    Method rhs_method = method;
    if (const auto* mc = std::get_if<McParams>(&method)) {
        lhs_method = McParams{mc->samples, derive_seed(mc->seed, 0), mc->workers};
        rhs_method = McParams{mc->samples, derive_seed(mc->seed, 1), mc->workers};
    }
    const IntegralEstimate lhs = integrate(desc, f, UniformMeasure{}, lhs_method);
    const IntegralEstimate rhs = integrate(desc, acted, UniformMeasure{}, rhs_method);
    const double discrepancy = std::abs(lhs.mean - rhs.mean);
    const double tolerance = std::holds_alternative<McParams>(method)
                                 ? 3.0 * std::hypot(lhs.stderr_value, rhs.stderr_value)
                                 : 0.0;
    return InvarianceReport{lhs, rhs, discrepancy, tolerance, discrepancy <= tolerance};
}

} // namespace gconn
