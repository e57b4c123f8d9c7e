#include "gconn/family.hpp"

#include <string>

namespace gconn {

namespace {

void check_values_kind(const GroupDescriptor& group, std::span<const GroupElement> values) {
    for (const GroupElement& g : values) {
        if (!(descriptor_of(g) == group)) {
            throw KindMismatch("value kind does not match the declared group");
        }
    }
}

} // namespace

AmbientConnection make_connection(const AmbientAlphabet& alphabet, const GroupDescriptor& group,
                                  std::vector<GroupElement> values) {
    if (values.size() != alphabet.atom_count()) {
        throw AlphabetMismatch("connection must assign exactly one element per atom (" +
                               std::to_string(alphabet.atom_count()) + " expected, " +
                               std::to_string(values.size()) + " given)");
    }
    check_values_kind(group, values);
    return AmbientConnection{group, std::move(values)};
}

Chart make_chart(const GroupDescriptor& group, TameSubgroupoid label, std::vector<GroupElement> values) {
    if (values.size() != label.size()) {
        throw Error("chart needs one value per generator (" + std::to_string(label.size()) +
                    " expected, " + std::to_string(values.size()) + " given)");
    }
    check_values_kind(group, values);
    return Chart{group, std::move(label), std::move(values)};
}

bool approx_equal(const Chart& a, const Chart& b, double tol) {
    if (!(a.group == b.group) || !(a.label == b.label)) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!approx_equal(a.values[i], b.values[i], tol)) return false;
    }
    return true;
}

GroupElement fold_refs(const GroupDescriptor& group, std::span<const GroupElement> values,
                       const GeneratorWord& refs) {
    GroupElement h = identity(group);
    for (const SignedRef& r : refs) {
        h = compose(signed_power(values[r.index], r.sign), h);
    }
    return h;
}

GroupElement evaluate(const AmbientConnection& conn, const PathWord& p) {
    GroupElement h = identity(conn.group);
    for (const Letter& l : p.letters) {
        if (l.atom >= conn.values.size()) {
            throw UnknownAtom("path references atom index " + std::to_string(l.atom) +
                              " outside the connection's alphabet");
        }
        h = compose(signed_power(conn.values[l.atom], l.sign), h);
    }
    return h;
}

GroupElement evaluate(const Chart& chart, const PathWord& p) {
    const auto refs = decompose_word(p, chart.label.generators());
    if (!refs) {
        throw PathOutsideSubgroupoid("path word does not factor over the chart's generators");
    }
    return fold_refs(chart.group, chart.values, *refs);
}

Chart coordinates(const AmbientConnection& conn, const TameSubgroupoid& label) {
    std::vector<GroupElement> values;
    values.reserve(label.size());
    for (const Edge& e : label.generators()) values.push_back(evaluate(conn, e.word()));
    return Chart{conn.group, label, std::move(values)};
}

Chart project(const TameSubgroupoid& coarse, const Chart& fine_chart) {
    const auto decomposition = subgroupoid_leq(coarse, fine_chart.label);
    if (!decomposition) {
        throw NotComparable("subgroupoid does not factor over the chart's label");
    }
    std::vector<GroupElement> values;
    values.reserve(coarse.size());
    for (const GeneratorWord& refs : decomposition->per_generator) {
        values.push_back(fold_refs(fine_chart.group, fine_chart.values, refs));
    }
    return Chart{fine_chart.group, coarse, std::move(values)};
}

Chart surjectivity_witness(const Chart& target, const TameSubgroupoid& fine) {
    const auto decomposition = subgroupoid_leq(target.label, fine);
    if (!decomposition) {
        throw NotComparable("target label does not factor over the finer subgroupoid");
    }
    std::vector<GroupElement> values(fine.size(), identity(target.group));
    for (std::size_t i = 0; i < decomposition->per_generator.size(); ++i) {
        const GeneratorWord& refs = decomposition->per_generator[i];
        // edges of the target label are nonempty, so refs is never empty; each
        // fine generator occurs at most once, so the first slot is free to set
        const SignedRef first = refs.front();
        values[first.index] = signed_power(target.values[i], first.sign);
    }
    return Chart{target.group, fine, std::move(values)};
}

TameSubgroupoid top_subgroupoid(const AmbientAlphabet& alphabet) {
    std::vector<Edge> gens;
    gens.reserve(alphabet.atom_count());
    for (std::uint32_t a = 0; a < alphabet.atom_count(); ++a) {
        gens.push_back(Edge::make(alphabet, reduce(alphabet, std::vector<Letter>{Letter{a, +1}})));
    }
    return TameSubgroupoid::make(alphabet, std::move(gens));
}

ReconstructionResult reconstruct_from_family(const AmbientAlphabet& alphabet, std::span<const Chart> charts,
                                             double tol) {
    const TameSubgroupoid top = top_subgroupoid(alphabet);
    const Chart* top_chart = nullptr;
    for (const Chart& c : charts) {
        if (c.label == top) {
            top_chart = &c;
            break;
        }
    }
    if (!top_chart) {
        throw MissingTop("family must include a chart on the top subgroupoid (all single atoms)");
    }
    for (std::size_t i = 0; i < charts.size(); ++i) {
        for (std::size_t j = 0; j < charts.size(); ++j) {
            if (i == j) continue;
            if (!subgroupoid_leq(charts[i].label, charts[j].label)) continue;
            const Chart projected = project(charts[i].label, charts[j]);
            if (!approx_equal(projected, charts[i], tol)) {
                return ReconstructionResult{std::nullopt, std::make_pair(i, j)};
            }
        }
    }
    return ReconstructionResult{
        AmbientConnection{top_chart->group, top_chart->values}, std::nullopt};
}

} // namespace gconn
