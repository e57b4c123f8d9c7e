#pragma once

#include <span>
#include <vector>

#include "gconn/cyl.hpp"
#include "gconn/measure.hpp"

namespace gconn {

/// A character product over an independent edge set, the intertwiner-free
/// spin-network sector of L^2(mu_0).
struct SpinNetworkFunction {
    CylFunction fn;
    std::vector<CharLabel> labels;

    /// Generators carrying a nontrivial character.
    std::vector<std::size_t> nontrivial(const GroupDescriptor& desc) const;
};

/// Validates the labels for the kind (su2 labels are twice the spin, >= 0).
SpinNetworkFunction make_spin_network(const GroupDescriptor& desc, TameSubgroupoid label,
                                      std::vector<CharLabel> labels);

/// chi_label of the holonomy of a closed path; gauge invariant because
/// characters are class functions. Throws NotClosed when s(p) != r(p).
CylFunction wilson_loop(const AmbientAlphabet& alphabet, const GroupDescriptor& desc,
                        const PathWord& loop, CharLabel label);

/// Row-major matrix of <funcs[i], funcs[j]> in L^2(mu_0). Monte Carlo entries
/// draw from per-entry substreams derived from the method seed.
struct GramMatrix {
    std::size_t size = 0;
    std::vector<IntegralEstimate> entries;

    const IntegralEstimate& at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

GramMatrix gram_matrix(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                       std::span<const SpinNetworkFunction> funcs, const Method& method);

} // namespace gconn
