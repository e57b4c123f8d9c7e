#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gconn/cyl.hpp"
#include "gconn/method.hpp"

namespace gconn {

/// The Haar-product family: every level carries mu_H^n.
struct UniformMeasure {};

/// Explicit per-level probability tables (finite kinds only), indexed like
/// FiniteTableNode values.
struct FiniteFamilyMeasure {
    std::vector<std::pair<TameSubgroupoid, std::vector<double>>> tables;
};

using MeasureSpec = std::variant<UniformMeasure, FiniteFamilyMeasure>;

/// Validates nonnegativity and normalization (sum 1 within 1e-12) per table.
FiniteFamilyMeasure make_finite_family(const GroupDescriptor& desc,
                                       std::vector<std::pair<TameSubgroupoid, std::vector<double>>> tables);

enum class EstimateMethod { Exact, Mc };

struct IntegralEstimate {
    Complex mean;
    double stderr_value = 0.0; // 0 for exact
    std::uint64_t samples = 0;
    EstimateMethod method = EstimateMethod::Exact;
    std::uint64_t seed = 0;   // mc only
    unsigned workers = 0;     // mc only
};

/// Integral of f against the measure.
///
/// Exact routes: the character shortcut under Uniform (products of characters
/// integrate by orthogonality, no sampling), full enumeration for finite kinds
/// with |G|^n <= 10^6, and table sums for finite families. Exact enumeration
/// accumulates in a canonical sorted order, so integrands that merely permute
/// each other's values integrate to bitwise-identical results.
///
/// Monte Carlo: Haar draws fanned over workers, stderr = sample std / sqrt(N)
/// with Bessel correction.
IntegralEstimate integrate(const GroupDescriptor& desc, const CylFunction& f, const MeasureSpec& measure,
                           const Method& method);

struct ConsistencyCheck {
    std::string what;
    double discrepancy;
    double tolerance;
    bool pass;
};

struct ConsistencyReport {
    bool pass = true;
    double max_discrepancy = 0.0;
    std::vector<ConsistencyCheck> checks;
};

/// Pushforward compatibility of the level measures along p_{L,L'}.
///
/// Finite kinds compare exactly over the spanning delta tables (in integer
/// fiber-count form for Uniform); Lie kinds compare Monte Carlo integrals of a
/// character battery at 3 sigma. `battery` lists one label per generator of
/// `coarse` and defaults to single nontrivial characters per generator.
ConsistencyReport check_consistency(const GroupDescriptor& desc, const MeasureSpec& measure,
                                    const TameSubgroupoid& coarse, const TameSubgroupoid& fine,
                                    const std::vector<std::vector<CharLabel>>& battery = {},
                                    const McParams& mc = McParams{1000000, 0, 1});

/// Mass transport of a table on A_{L'} along p_{L,L'} (finite kinds).
std::vector<double> pushforward(const GroupDescriptor& desc, const TameSubgroupoid& coarse,
                                const TameSubgroupoid& fine, std::span<const double> table);

/// <f, h> = integral of conj(f) * h. Functions on different labels are first
/// rewritten over the atoms they jointly involve.
IntegralEstimate inner_product(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                               const CylFunction& f, const CylFunction& h, const MeasureSpec& measure,
                               const Method& method);

} // namespace gconn
