#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gconn/groupoid.hpp"
#include "gconn/groups.hpp"

namespace gconn {

/// A point of A_L = Hom[L, G]: one group element per ordered generator.
struct Chart {
    GroupDescriptor group;
    TameSubgroupoid label;
    std::vector<GroupElement> values;
};

/// A morphism from the free groupoid on the whole alphabet to G; the finite
/// model of a generalized connection. values[i] is the holonomy of atom i.
struct AmbientConnection {
    GroupDescriptor group;
    std::vector<GroupElement> values;
};

AmbientConnection make_connection(const AmbientAlphabet& alphabet, const GroupDescriptor& group,
                                  std::vector<GroupElement> values);

Chart make_chart(const GroupDescriptor& group, TameSubgroupoid label, std::vector<GroupElement> values);

bool approx_equal(const Chart& a, const Chart& b, double tol = 1e-9);

/// Signed product over a generator word, later factors multiplying on the
/// left: refs (r_1 .. r_k) evaluate to v_{r_k}^{s_k} * ... * v_{r_1}^{s_1}.
GroupElement fold_refs(const GroupDescriptor& group, std::span<const GroupElement> values,
                       const GeneratorWord& refs);

/// Holonomy of a path word under an ambient connection (morphism law fold).
GroupElement evaluate(const AmbientConnection& conn, const PathWord& p);

/// Holonomy under a chart; the word must factor over the chart's generators.
/// Throws PathOutsideSubgroupoid otherwise.
GroupElement evaluate(const Chart& chart, const PathWord& p);

/// The projection p_L: restriction of an ambient connection to A_L.
Chart coordinates(const AmbientConnection& conn, const TameSubgroupoid& label);

/// The projection p_{L,L'} applied to a chart on the finer L'.
/// Throws NotComparable when `coarse` does not factor over the chart's label.
Chart project(const TameSubgroupoid& coarse, const Chart& fine_chart);

/// A preimage of `target` under p_{L,L'}: the first factor of each generator's
/// decomposition realizes the target value, every other involved generator is
/// the identity. Throws NotComparable.
Chart surjectivity_witness(const Chart& target, const TameSubgroupoid& fine);

/// Generators = the single atoms in alphabet order; the finest label a fixed
/// alphabet admits.
TameSubgroupoid top_subgroupoid(const AmbientAlphabet& alphabet);

struct ReconstructionResult {
    std::optional<AmbientConnection> connection;
    /// Indices into the supplied charts of a pair violating consistency.
    std::optional<std::pair<std::size_t, std::size_t>> violation;

    bool consistent() const { return connection.has_value(); }
};

/// Inverse of the restriction map on a consistent family: checks every
/// comparable supplied pair and reads the connection off the top chart.
/// Throws MissingTop when no chart is labeled by top_subgroupoid(alphabet).
ReconstructionResult reconstruct_from_family(const AmbientAlphabet& alphabet, std::span<const Chart> charts,
                                             double tol = 1e-9);

} // namespace gconn
