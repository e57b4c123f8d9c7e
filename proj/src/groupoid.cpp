#include "gconn/groupoid.hpp"

#include <algorithm>
#include <set>

namespace gconn {

AmbientAlphabet::AmbientAlphabet(std::vector<std::string> vertices, const std::vector<AtomSpec>& atoms)
    : vertices_(std::move(vertices)) {
    for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
        if (!vertex_index_.emplace(vertices_[i], i).second) {
            throw Error("duplicate vertex \"" + vertices_[i] + "\"");
        }
    }
    atoms_.reserve(atoms.size());
    for (const auto& spec : atoms) {
        const auto src = find_vertex(spec.src);
        const auto dst = find_vertex(spec.dst);
        if (!src) throw Error("atom \"" + spec.id + "\" has unknown source vertex \"" + spec.src + "\"");
        if (!dst) throw Error("atom \"" + spec.id + "\" has unknown target vertex \"" + spec.dst + "\"");
        const auto index = static_cast<std::uint32_t>(atoms_.size());
        if (!atom_index_.emplace(spec.id, index).second) {
            throw Error("duplicate atom id \"" + spec.id + "\"");
        }
        atoms_.push_back(Atom{spec.id, *src, *dst});
    }
}

std::optional<std::uint32_t> AmbientAlphabet::find_vertex(std::string_view name) const {
    const auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> AmbientAlphabet::find_atom(std::string_view id) const {
    const auto it = atom_index_.find(id);
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t letter_source(const AmbientAlphabet& alphabet, Letter l) {
    const Atom& a = alphabet.atom(l.atom);
    return l.sign >= 0 ? a.src : a.dst;
}

std::uint32_t letter_target(const AmbientAlphabet& alphabet, Letter l) {
    const Atom& a = alphabet.atom(l.atom);
    return l.sign >= 0 ? a.dst : a.src;
}

PathWord reduce(const AmbientAlphabet& alphabet, std::span<const Letter> letters,
                std::optional<std::uint32_t> base) {
    if (letters.empty()) {
        if (!base) throw NotComposable("empty letter sequence needs an explicit base vertex");
        if (*base >= alphabet.vertex_count()) throw UnknownAtom("base vertex index out of range");
        return identity_word(*base);
    }
    for (const Letter& l : letters) {
        if (l.atom >= alphabet.atom_count()) throw UnknownAtom("letter references atom index out of range");
        if (l.sign != 1 && l.sign != -1) throw NotComposable("letter sign must be +1 or -1");
    }
    const std::uint32_t source = letter_source(alphabet, letters.front());
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
        if (letter_target(alphabet, letters[i]) != letter_source(alphabet, letters[i + 1])) {
            throw NotComposable("letters " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                " do not share an endpoint");
        }
    }
    std::vector<Letter> stack;
    stack.reserve(letters.size());
    for (const Letter& l : letters) {
        if (!stack.empty() && stack.back() == inverse(l)) {
            stack.pop_back();
        } else {
            stack.push_back(l);
        }
    }
    return PathWord{source, std::move(stack)};
}

std::uint32_t word_source(const AmbientAlphabet& alphabet, const PathWord& w) {
    return w.letters.empty() ? w.base : letter_source(alphabet, w.letters.front());
}

std::uint32_t word_range(const AmbientAlphabet& alphabet, const PathWord& w) {
    return w.letters.empty() ? w.base : letter_target(alphabet, w.letters.back());
}

PathWord invert_word(const AmbientAlphabet& alphabet, const PathWord& w) {
    std::vector<Letter> rev(w.letters.rbegin(), w.letters.rend());
    for (Letter& l : rev) l = inverse(l);
    return PathWord{word_range(alphabet, w), std::move(rev)};
}

std::vector<std::uint32_t> visited_vertices(const AmbientAlphabet& alphabet, const PathWord& w) {
    std::vector<std::uint32_t> out;
    out.reserve(w.letters.size() + 1);
    out.push_back(word_source(alphabet, w));
    for (const Letter& l : w.letters) out.push_back(letter_target(alphabet, l));
    return out;
}

PathWord compose_paths(const AmbientAlphabet& alphabet, const PathWord& second, const PathWord& first) {
    if (word_source(alphabet, second) != word_range(alphabet, first)) {
        throw EndpointMismatch("cannot compose: source of second path (" +
                               alphabet.vertex_name(word_source(alphabet, second)) +
                               ") differs from range of first (" +
                               alphabet.vertex_name(word_range(alphabet, first)) + ")");
    }
    std::vector<Letter> cat;
    cat.reserve(first.letters.size() + second.letters.size());
    cat.insert(cat.end(), first.letters.begin(), first.letters.end());
    cat.insert(cat.end(), second.letters.begin(), second.letters.end());
    return reduce(alphabet, cat, word_source(alphabet, first));
}

bool is_simple(const AmbientAlphabet& alphabet, const PathWord& w) {
    std::set<std::uint32_t> atoms;
    for (const Letter& l : w.letters) {
        if (!atoms.insert(l.atom).second) return false;
    }
    const auto verts = visited_vertices(alphabet, w);
    const std::uint32_t first = verts.front();
    const std::uint32_t last = verts.back();
    std::set<std::uint32_t> interior;
    for (std::size_t i = 1; i + 1 < verts.size(); ++i) {
        if (verts[i] == first || verts[i] == last) return false;
        if (!interior.insert(verts[i]).second) return false;
    }
    return true;
}

Edge Edge::make(const AmbientAlphabet& alphabet, PathWord word) {
    if (word.letters.empty()) throw NotSimple("an identity word is not an edge");
    // re-reduce to reject unreduced or non-composable input
    PathWord normalized = reduce(alphabet, word.letters);
    if (normalized.letters != word.letters) throw NotSimple("edge word must be reduced");
    if (!is_simple(alphabet, normalized)) {
        throw NotSimple("edge word revisits an atom or an interior vertex");
    }
    return Edge(std::move(normalized));
}

bool is_independent(const AmbientAlphabet& alphabet, std::span<const Edge> edges) {
    std::vector<std::set<std::uint32_t>> supports;
    std::vector<std::set<std::uint32_t>> interiors;
    std::vector<std::vector<std::uint32_t>> visited;
    supports.reserve(edges.size());
    for (const Edge& e : edges) {
        std::set<std::uint32_t> support;
        for (const Letter& l : e.word().letters) support.insert(l.atom);
        supports.push_back(std::move(support));
        auto verts = visited_vertices(alphabet, e.word());
        interiors.emplace_back(verts.begin() + 1, verts.end() - 1);
        visited.push_back(std::move(verts));
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < edges.size(); ++j) {
            if (i == j) continue;
            for (const std::uint32_t a : supports[i]) {
                if (supports[j].count(a)) return false;
            }
            for (const std::uint32_t v : visited[j]) {
                if (interiors[i].count(v)) return false;
            }
        }
    }
    return true;
}

TameSubgroupoid TameSubgroupoid::make(const AmbientAlphabet& alphabet, std::vector<Edge> generators) {
    if (!is_independent(alphabet, generators)) {
        throw NotIndependent("generator edges are not independent");
    }
    return TameSubgroupoid(std::move(generators));
}

std::optional<GeneratorWord> decompose_word(const PathWord& word, std::span<const Edge> generators) {
    std::map<std::uint32_t, std::uint32_t> owner; // atom -> generator index
    for (std::uint32_t k = 0; k < generators.size(); ++k) {
        for (const Letter& l : generators[k].word().letters) owner.emplace(l.atom, k);
    }
    GeneratorWord out;
    std::size_t pos = 0;
    const auto& letters = word.letters;
    while (pos < letters.size()) {
        const auto it = owner.find(letters[pos].atom);
        if (it == owner.end()) return std::nullopt;
        const std::uint32_t k = it->second;
        const auto& gen = generators[k].word().letters;
        const std::size_t m = gen.size();
        if (pos + m > letters.size()) return std::nullopt;
        bool forward = true;
        bool backward = true;
        for (std::size_t i = 0; i < m && (forward || backward); ++i) {
            if (letters[pos + i] != gen[i]) forward = false;
            if (letters[pos + i] != inverse(gen[m - 1 - i])) backward = false;
        }
        if (forward) {
            out.push_back(SignedRef{k, +1});
        } else if (backward) {
            out.push_back(SignedRef{k, -1});
        } else {
            return std::nullopt;
        }
        pos += m;
    }
    return out;
}

std::optional<Decomposition> subgroupoid_leq(const TameSubgroupoid& coarse, const TameSubgroupoid& fine) {
    Decomposition decomposition;
    decomposition.per_generator.reserve(coarse.size());
    for (const Edge& e : coarse.generators()) {
        auto factors = decompose_word(e.word(), fine.generators());
        if (!factors) return std::nullopt;
        decomposition.per_generator.push_back(std::move(*factors));
    }
    return decomposition;
}

} // namespace gconn
