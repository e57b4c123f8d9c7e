#pragma once

#include <vector>

#include "gconn/family.hpp"
#include "gconn/groupoid.hpp"
#include "gconn/groups.hpp"
#include "gconn/rng.hpp"

namespace gconn::testing {

/// Random alphabet with 2..5 vertices and up to max_atoms atoms between
/// random endpoints (self-loops allowed).
inline AmbientAlphabet random_alphabet(RngStream& rng, std::size_t max_atoms = 8) {
    const std::size_t nv = 2 + rng.uniform_below(4);
    std::vector<std::string> vertices;
    for (std::size_t v = 0; v < nv; ++v) vertices.push_back("v" + std::to_string(v));
    const std::size_t na = 1 + rng.uniform_below(max_atoms);
    std::vector<AtomSpec> atoms;
    for (std::size_t a = 0; a < na; ++a) {
        atoms.push_back(AtomSpec{"a" + std::to_string(a),
                                 vertices[rng.uniform_below(nv)],
                                 vertices[rng.uniform_below(nv)]});
    }
    return AmbientAlphabet(std::move(vertices), atoms);
}

/// Composable raw letter sequence of the requested length (or shorter if the
/// walk hits a vertex with no incident atoms); may contain retracings.
inline std::vector<Letter> random_raw_letters(RngStream& rng, const AmbientAlphabet& alphabet,
                                              std::size_t length, std::uint32_t start) {
    std::vector<Letter> out;
    std::uint32_t here = start;
    for (std::size_t step = 0; step < length; ++step) {
        std::vector<Letter> options;
        for (std::uint32_t a = 0; a < alphabet.atom_count(); ++a) {
            for (const int sign : {+1, -1}) {
                const Letter l{a, static_cast<std::int8_t>(sign)};
                if (letter_source(alphabet, l) == here) options.push_back(l);
            }
        }
        if (options.empty()) break;
        const Letter pick = options[rng.uniform_below(options.size())];
        out.push_back(pick);
        here = letter_target(alphabet, pick);
    }
    return out;
}

inline PathWord random_word(RngStream& rng, const AmbientAlphabet& alphabet, std::size_t max_length) {
    const auto start = static_cast<std::uint32_t>(rng.uniform_below(alphabet.vertex_count()));
    const auto letters = random_raw_letters(rng, alphabet, rng.uniform_below(max_length + 1), start);
    return reduce(alphabet, letters, start);
}

inline AmbientConnection random_connection(RngStream& rng, const AmbientAlphabet& alphabet,
                                           const GroupDescriptor& desc) {
    std::vector<GroupElement> values;
    values.reserve(alphabet.atom_count());
    for (std::size_t a = 0; a < alphabet.atom_count(); ++a) values.push_back(haar_sample(desc, rng));
    return make_connection(alphabet, desc, std::move(values));
}

inline GroupElement random_element(RngStream& rng, const GroupDescriptor& desc) {
    return haar_sample(desc, rng);
}

} // namespace gconn::testing
