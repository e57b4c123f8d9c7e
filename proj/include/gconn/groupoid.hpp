#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gconn/errors.hpp"

namespace gconn {

/// Atomic oriented segment of the ambient alphabet; endpoints are vertex indices.
struct Atom {
    std::string id;
    std::uint32_t src;
    std::uint32_t dst;
};

struct AtomSpec {
    std::string id;
    std::string src;
    std::string dst;
};

/// The finite stand-in for the base manifold: labeled vertices plus a fixed
/// list of atomic segments every path word is spelled over.
class AmbientAlphabet {
public:
    AmbientAlphabet(std::vector<std::string> vertices, const std::vector<AtomSpec>& atoms);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t atom_count() const { return atoms_.size(); }
    const std::string& vertex_name(std::uint32_t v) const { return vertices_.at(v); }
    const Atom& atom(std::uint32_t a) const { return atoms_.at(a); }
    std::optional<std::uint32_t> find_vertex(std::string_view name) const;
    std::optional<std::uint32_t> find_atom(std::string_view id) const;

private:
    std::vector<std::string> vertices_;
    std::vector<Atom> atoms_;
    std::map<std::string, std::uint32_t, std::less<>> vertex_index_;
    std::map<std::string, std::uint32_t, std::less<>> atom_index_;
};

/// One signed traversal of an atom. sign -1 walks the atom backwards.
struct Letter {
    std::uint32_t atom;
    std::int8_t sign; // +1 or -1

    friend bool operator==(const Letter&, const Letter&) = default;
};

inline Letter inverse(Letter l) { return Letter{l.atom, static_cast<std::int8_t>(-l.sign)}; }

std::uint32_t letter_source(const AmbientAlphabet& alphabet, Letter l);
std::uint32_t letter_target(const AmbientAlphabet& alphabet, Letter l);

/// A reduced composable word; the value representative of a path.
/// `base` is the source vertex and is authoritative for identity words.
struct PathWord {
    std::uint32_t base = 0;
    std::vector<Letter> letters;

    bool is_identity() const { return letters.empty(); }

    friend bool operator==(const PathWord&, const PathWord&) = default;
};

inline PathWord identity_word(std::uint32_t vertex) { return PathWord{vertex, {}}; }

/// Cancels retracings in a raw composable letter sequence. The result is the
/// unique reduced representative; an empty result keeps the sequence's source
/// as its base (or `base` when the input is already empty).
PathWord reduce(const AmbientAlphabet& alphabet, std::span<const Letter> letters,
                std::optional<std::uint32_t> base = std::nullopt);

std::uint32_t word_source(const AmbientAlphabet& alphabet, const PathWord& w);
std::uint32_t word_range(const AmbientAlphabet& alphabet, const PathWord& w);
PathWord invert_word(const AmbientAlphabet& alphabet, const PathWord& w);

/// Vertex sequence v_0 .. v_k visited in travel order.
std::vector<std::uint32_t> visited_vertices(const AmbientAlphabet& alphabet, const PathWord& w);

/// Groupoid composition second*first: first is traversed first.
/// Throws EndpointMismatch unless s(second) = r(first).
PathWord compose_paths(const AmbientAlphabet& alphabet, const PathWord& second, const PathWord& first);

/// Simplicity: no atom twice in any sign, interior vertices pairwise distinct
/// and distinct from both endpoints. Closed words (s = r) qualify.
bool is_simple(const AmbientAlphabet& alphabet, const PathWord& w);

/// A simple nonempty path word; the combinatorial analog of an analytic arc.
class Edge {
public:
    static Edge make(const AmbientAlphabet& alphabet, PathWord word);
    const PathWord& word() const { return word_; }

    friend bool operator==(const Edge&, const Edge&) = default;

private:
    explicit Edge(PathWord w) : word_(std::move(w)) {}
    PathWord word_;
};

/// Edges may meet only at endpoints: pairwise disjoint atom supports and no
/// interior vertex of one edge anywhere on another.
bool is_independent(const AmbientAlphabet& alphabet, std::span<const Edge> edges);

/// An ordered, oriented independent generating set. Order and orientation are
/// part of the identity; they fix the chart coordinates downstream.
class TameSubgroupoid {
public:
    static TameSubgroupoid make(const AmbientAlphabet& alphabet, std::vector<Edge> generators);

    std::size_t size() const { return generators_.size(); }
    const std::vector<Edge>& generators() const { return generators_; }

    friend bool operator==(const TameSubgroupoid&, const TameSubgroupoid&) = default;

private:
    explicit TameSubgroupoid(std::vector<Edge> gens) : generators_(std::move(gens)) {}
    std::vector<Edge> generators_;
};

/// Signed reference into an ordered generator list.
struct SignedRef {
    std::uint32_t index;
    std::int8_t sign;

    friend bool operator==(const SignedRef&, const SignedRef&) = default;
};

using GeneratorWord = std::vector<SignedRef>;

/// Per-generator words of a coarser subgroupoid spelled in a finer one's
/// generators, in travel order.
struct Decomposition {
    std::vector<GeneratorWord> per_generator;

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Greedy unique factorization of `word` into full generator words and their
/// inverses. Disjoint supports make the match at each position forced, so
/// failure at any point means no factorization exists.
std::optional<GeneratorWord> decompose_word(const PathWord& word, std::span<const Edge> generators);

/// L <= L' test: every generator of `coarse` must factor over `fine`.
/// The empty optional is the NotComparable outcome.
std::optional<Decomposition> subgroupoid_leq(const TameSubgroupoid& coarse, const TameSubgroupoid& fine);

} // namespace gconn
