#include "gconn/basis.hpp"

#include <string>

namespace gconn {

std::vector<std::size_t> SpinNetworkFunction::nontrivial(const GroupDescriptor& desc) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!is_trivial_label(desc, labels[i])) out.push_back(i);
    }
    return out;
}

SpinNetworkFunction make_spin_network(const GroupDescriptor& desc, TameSubgroupoid label,
                                      std::vector<CharLabel> labels) {
    if (labels.size() != label.size()) {
        throw InvalidLabel("need one character label per generator (" + std::to_string(label.size()) +
                           " expected, " + std::to_string(labels.size()) + " given)");
    }
    if (desc.kind == GroupKind::SpecialUnitary2) {
        for (const CharLabel l : labels) {
            if (l < 0) throw InvalidLabel("SU(2) spin label must satisfy 2j >= 0");
        }
    }
    CylFunction fn = make_cyl(std::move(label), Expression::character_product(labels));
    return SpinNetworkFunction{std::move(fn), std::move(labels)};
}

CylFunction wilson_loop(const AmbientAlphabet& alphabet, const GroupDescriptor& desc,
                        const PathWord& loop, CharLabel label) {
    if (word_source(alphabet, loop) != word_range(alphabet, loop)) {
        throw NotClosed("Wilson loops need a closed path; got " +
                        alphabet.vertex_name(word_source(alphabet, loop)) + " -> " +
                        alphabet.vertex_name(word_range(alphabet, loop)));
    }
    if (desc.kind == GroupKind::SpecialUnitary2 && label < 0) {
        throw InvalidLabel("SU(2) spin label must satisfy 2j >= 0");
    }
    const PathWord paths[] = {loop};
    return rewrite_over_paths(alphabet, Expression::character_product({label}), paths);
}

GramMatrix gram_matrix(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                       std::span<const SpinNetworkFunction> funcs, const Method& method) {
    GramMatrix gram;
    gram.size = funcs.size();
    gram.entries.reserve(funcs.size() * funcs.size());
    for (std::size_t i = 0; i < funcs.size(); ++i) {
        for (std::size_t j = 0; j < funcs.size(); ++j) {
            Method entry_method = method;
            if (const auto* mc = std::get_if<McParams>(&method)) {
                entry_method =
                    McParams{mc->samples, derive_seed(mc->seed, i * funcs.size() + j), mc->workers};
            }
            gram.entries.push_back(inner_product(desc, alphabet, funcs[i].fn, funcs[j].fn,
                                                 UniformMeasure{}, entry_method));
        }
    }
    return gram;
}

} // namespace gconn
