#pragma once

#include <map>
#include <variant>
#include <vector>

#include "gconn/cyl.hpp"
#include "gconn/family.hpp"
#include "gconn/measure.hpp"

namespace gconn {

/// A group-valued map on vertices, identity off the stored support.
struct GaugeTransformation {
    GroupDescriptor group;
    std::map<std::uint32_t, GroupElement> values;
};

GaugeTransformation make_gauge(const AmbientAlphabet& alphabet, const GroupDescriptor& group,
                               std::map<std::uint32_t, GroupElement> values);

GroupElement gauge_value(const GaugeTransformation& gauge, std::uint32_t vertex);

/// Pointwise product (h*g)(x) = h(x)g(x).
GaugeTransformation compose_gauges(const GaugeTransformation& h, const GaugeTransformation& g);

struct AtomImage {
    std::uint32_t to;
    std::int8_t sign; // -1 reverses orientation
};

/// An incidence-preserving signed relabeling of the alphabet: the finite model
/// of a path-groupoid automorphism.
class GroupoidAutomorphism {
public:
    /// vertex_map[v] and atom_map[a] give the images; both must be bijections
    /// with atom images matching the mapped endpoints (swapped for sign -1).
    static GroupoidAutomorphism make(const AmbientAlphabet& alphabet,
                                     std::vector<std::uint32_t> vertex_map,
                                     std::vector<AtomImage> atom_map);

    static GroupoidAutomorphism identity_map(const AmbientAlphabet& alphabet);

    const std::vector<std::uint32_t>& vertex_map() const { return vertex_map_; }
    const std::vector<AtomImage>& atom_map() const { return atom_map_; }

    GroupoidAutomorphism inverse(const AmbientAlphabet& alphabet) const;

private:
    GroupoidAutomorphism(std::vector<std::uint32_t> vm, std::vector<AtomImage> am)
        : vertex_map_(std::move(vm)), atom_map_(std::move(am)) {}

    std::vector<std::uint32_t> vertex_map_;
    std::vector<AtomImage> atom_map_;
};

/// F∘G: apply G first.
GroupoidAutomorphism compose_automorphisms(const AmbientAlphabet& alphabet,
                                           const GroupoidAutomorphism& f, const GroupoidAutomorphism& g);

PathWord apply_to_word(const GroupoidAutomorphism& f, const PathWord& w,
                       const AmbientAlphabet& alphabet);
Edge apply_to_edge(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f, const Edge& e);
TameSubgroupoid apply_to_subgroupoid(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f,
                                     const TameSubgroupoid& label);

/// Per atom a: value -> g(r(a)) value g(s(a))^{-1}.
AmbientConnection gauge_act(const AmbientAlphabet& alphabet, const GaugeTransformation& gauge,
                            const AmbientConnection& conn);

/// (F A)(p) = A(F^{-1} p), realized atomwise with sign-aware inversion.
AmbientConnection automorphism_act(const AmbientAlphabet& alphabet, const GroupoidAutomorphism& f,
                                   const AmbientConnection& conn);

using Transformation = std::variant<GaugeTransformation, GroupoidAutomorphism>;

/// The unitary action on functions: (U f)(A) = f(T^{-1} A).
CylFunction act_on_function(const AmbientAlphabet& alphabet, const Transformation& transform,
                            const CylFunction& f);

struct InvarianceReport {
    IntegralEstimate lhs; // integral of f
    IntegralEstimate rhs; // integral of the acted function
    double discrepancy;
    double tolerance; // 0 for exact kinds, 3 sigma for mc
    bool pass;
};

/// Compares the uniform integral of f against that of the acted function.
InvarianceReport invariance_report(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                                   const CylFunction& f, const Transformation& transform,
                                   const Method& method);

} // namespace gconn
