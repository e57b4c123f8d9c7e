#include "gconn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "gconn/tuples.hpp"

namespace gconn {

namespace {

constexpr std::uint64_t kExactLimit = 1000000;

// ---- analytic character shortcut ----------------------------------------

// A linear combination of per-slot character products: factor * prod_i
// (product of chi over slot_labels[i]).
struct CharTerm {
    Complex factor;
    std::vector<std::vector<CharLabel>> slot_labels;
};

// Flattens const/charprod/sum/product/conjugate trees; empty optional when the
// expression leaves the character algebra.
std::optional<std::vector<CharTerm>> flatten_characters(const GroupDescriptor& desc,
                                                        const Expression& expr, std::size_t arity) {
    using Terms = std::vector<CharTerm>;
    struct Visitor {
        const GroupDescriptor& desc;
        std::size_t arity;

        std::optional<Terms> operator()(const ConstantNode& n) const {
            return Terms{CharTerm{n.value, std::vector<std::vector<CharLabel>>(arity)}};
        }

        std::optional<Terms> operator()(const CharProductNode& n) const {
            if (n.labels.size() != arity) return std::nullopt;
            CharTerm t{Complex{1.0, 0.0}, std::vector<std::vector<CharLabel>>(arity)};
            for (std::size_t i = 0; i < arity; ++i) {
                if (!is_trivial_label(desc, n.labels[i])) t.slot_labels[i].push_back(n.labels[i]);
            }
            return Terms{std::move(t)};
        }

        std::optional<Terms> operator()(const SumNode& n) const {
            Terms out;
            for (const Expression& e : n.args) {
                auto sub = flatten_characters(desc, e, arity);
                if (!sub) return std::nullopt;
                out.insert(out.end(), sub->begin(), sub->end());
            }
            return out;
        }

        std::optional<Terms> operator()(const ProductNode& n) const {
            Terms acc{CharTerm{Complex{1.0, 0.0}, std::vector<std::vector<CharLabel>>(arity)}};
            for (const Expression& e : n.args) {
                auto sub = flatten_characters(desc, e, arity);
                if (!sub) return std::nullopt;
                Terms next;
                for (const CharTerm& a : acc) {
                    for (const CharTerm& b : *sub) {
                        CharTerm merged{a.factor * b.factor, a.slot_labels};
                        for (std::size_t i = 0; i < arity; ++i) {
                            merged.slot_labels[i].insert(merged.slot_labels[i].end(),
                                                         b.slot_labels[i].begin(), b.slot_labels[i].end());
                        }
                        next.push_back(std::move(merged));
                    }
                }
                acc = std::move(next);
            }
            return acc;
        }

        std::optional<Terms> operator()(const ConjugateNode& n) const {
            auto sub = flatten_characters(desc, n.arg, arity);
            if (!sub) return std::nullopt;
            for (CharTerm& t : *sub) {
                t.factor = std::conj(t.factor);
                if (desc.kind != GroupKind::SpecialUnitary2) {
                    // conj(chi_k) = chi_{-k} for the abelian kinds; SU(2)
                    // characters are real
                    for (auto& labels : t.slot_labels) {
                        for (CharLabel& l : labels) l = -l;
                    }
                }
            }
            return sub;
        }

        std::optional<Terms> operator()(const FiniteTableNode&) const { return std::nullopt; }
        std::optional<Terms> operator()(const MatrixPolyNode&) const { return std::nullopt; }
        std::optional<Terms> operator()(const ComposeNode&) const { return std::nullopt; }
        std::optional<Terms> operator()(const SlotMulNode&) const { return std::nullopt; }
    };
    return std::visit(Visitor{desc, arity}, expr.node().v);
}

// Haar integral of a product of irreducible characters on one slot: the
// multiplicity of the trivial representation in the tensor product.
double trivial_multiplicity(const GroupDescriptor& desc, const std::vector<CharLabel>& labels) {
    switch (desc.kind) {
        case GroupKind::CyclicZ: {
            const auto n = static_cast<long long>(desc.order);
            long long total = 0;
            for (const CharLabel l : labels) total = ((total + l) % n + n) % n;
            return total == 0 ? 1.0 : 0.0;
        }
        case GroupKind::CircleU1: {
            long long total = 0;
            for (const CharLabel l : labels) total += l;
            return total == 0 ? 1.0 : 0.0;
        }
        case GroupKind::SpecialUnitary2: {
            // Clebsch-Gordan fold over twice-spin values
            std::map<long long, double> mult{{0, 1.0}};
            for (const CharLabel l : labels) {
                if (l < 0) throw InvalidLabel("SU(2) spin label must satisfy 2j >= 0");
                std::map<long long, double> next;
                for (const auto& [m2, count] : mult) {
                    for (long long k = std::llabs(m2 - l); k <= m2 + l; k += 2) {
                        next[k] += count;
                    }
                }
                mult = std::move(next);
            }
            const auto it = mult.find(0);
            return it == mult.end() ? 0.0 : it->second;
        }
    }
    throw Error("unreachable");
}

std::optional<Complex> try_character_integral(const GroupDescriptor& desc, const Expression& expr,
                                              std::size_t arity) {
    const auto terms = flatten_characters(desc, expr, arity);
    if (!terms) return std::nullopt;
    Complex out{0.0, 0.0};
    for (const CharTerm& t : *terms) {
        double weight = 1.0;
        for (const auto& labels : t.slot_labels) weight *= trivial_multiplicity(desc, labels);
        out += t.factor * weight;
    }
    return out;
}

// ---- exact enumeration ----------------------------------------------------

// Canonical (sorted) accumulation: permutation-equivalent integrand value sets
// sum to bitwise-identical results.
Complex sorted_mean(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    Complex total{0.0, 0.0};
    for (const Complex& v : values) total += v;
    return total / static_cast<double>(values.size());
}

IntegralEstimate exact_uniform_finite(const GroupDescriptor& desc, const CylFunction& f) {
    const std::uint64_t count = checked_power(desc.order, f.label.size(), kExactLimit);
    std::vector<Complex> values;
    values.reserve(count);
    std::vector<GroupElement> slots;
    for_each_residue_tuple(desc.order, f.label.size(), [&](std::span<const std::uint64_t> tuple) {
        slots.clear();
        for (const std::uint64_t r : tuple) slots.push_back(GroupElement::zn(desc.order, r));
        values.push_back(f.expr.eval(slots));
    });
    return IntegralEstimate{sorted_mean(values), 0.0, count, EstimateMethod::Exact, 0, 0};
}

IntegralEstimate exact_finite_family(const GroupDescriptor& desc, const CylFunction& f,
                                     const FiniteFamilyMeasure& family) {
    const std::vector<double>* table = nullptr;
    for (const auto& [label, weights] : family.tables) {
        if (label == f.label) {
            table = &weights;
            break;
        }
    }
    if (!table) throw Error("finite family carries no table for the function's label");
    checked_power(desc.order, f.label.size(), kExactLimit);
    Complex total{0.0, 0.0};
    std::vector<GroupElement> slots;
    std::size_t idx = 0;
    for_each_residue_tuple(desc.order, f.label.size(), [&](std::span<const std::uint64_t> tuple) {
        slots.clear();
        for (const std::uint64_t r : tuple) slots.push_back(GroupElement::zn(desc.order, r));
        total += (*table)[idx++] * f.expr.eval(slots);
    });
    return IntegralEstimate{total, 0.0, idx, EstimateMethod::Exact, 0, 0};
}

// ---- Monte Carlo ------------------------------------------------------------

struct McPartial {
    Complex sum{0.0, 0.0};
    double sum_sq = 0.0;
};

IntegralEstimate mc_uniform(const GroupDescriptor& desc, const CylFunction& f, const McParams& mc) {
    const unsigned workers = std::max(1u, mc.workers);
    const std::size_t arity = f.label.size();
    std::vector<McPartial> partials(workers);

    auto run_worker = [&](unsigned w) {
        const std::uint64_t count = mc.samples / workers + (w < mc.samples % workers ? 1 : 0);
        RngStream rng(mc.seed, w);
        std::vector<GroupElement> slots;
        McPartial partial;
        for (std::uint64_t i = 0; i < count; ++i) {
            slots.clear();
            for (std::size_t s = 0; s < arity; ++s) slots.push_back(haar_sample(desc, rng));
            const Complex z = f.expr.eval(slots);
            partial.sum += z;
            partial.sum_sq += std::norm(z);
        }
        partials[w] = partial;
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
        for (std::thread& t : threads) t.join();
    }

    Complex sum{0.0, 0.0};
    double sum_sq = 0.0;
    for (const McPartial& p : partials) { // ascending worker order
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const auto n = static_cast<double>(mc.samples);
    if (mc.samples == 0) throw Error("mc method needs at least one sample");
    const Complex mean = sum / n;
    double stderr_value = 0.0;
    if (mc.samples > 1) {
        const double var = std::max(0.0, (sum_sq - n * std::norm(mean)) / (n - 1.0));
        stderr_value = std::sqrt(var / n);
    }
    return IntegralEstimate{mean, stderr_value, mc.samples, EstimateMethod::Mc, mc.seed, workers};
}

} // namespace

FiniteFamilyMeasure make_finite_family(const GroupDescriptor& desc,
                                       std::vector<std::pair<TameSubgroupoid, std::vector<double>>> tables) {
    if (!desc.is_finite()) throw NotFinite("finite-family measures need a finite kind");
    for (const auto& [label, weights] : tables) {
        const std::uint64_t expected = checked_power(desc.order, label.size(), 1u << 24);
        if (weights.size() != expected) {
            throw Error("table size " + std::to_string(weights.size()) + " does not match |G|^n = " +
                        std::to_string(expected));
        }
        double total = 0.0;
        for (const double w : weights) {
            if (!(w >= 0.0)) throw Error("table weights must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw Error("table weights must sum to 1 within 1e-12, got " + std::to_string(total));
        }
    }
    return FiniteFamilyMeasure{std::move(tables)};
}

IntegralEstimate integrate(const GroupDescriptor& desc, const CylFunction& f, const MeasureSpec& measure,
                           const Method& method) {
    if (const auto* family = std::get_if<FiniteFamilyMeasure>(&measure)) {
        if (!std::holds_alternative<ExactTag>(method)) {
            throw Error("finite-family measures integrate exactly; use the exact method");
        }
        return exact_finite_family(desc, f, *family);
    }
    if (const auto* mc = std::get_if<McParams>(&method)) {
        return mc_uniform(desc, f, *mc);
    }
    if (const auto shortcut = try_character_integral(desc, f.expr, f.label.size())) {
        return IntegralEstimate{*shortcut, 0.0, 0, EstimateMethod::Exact, 0, 0};
    }
    if (!desc.is_finite()) {
        throw TooLargeForExact("no exact route for " + std::string(kind_name(desc.kind)) +
                               " beyond the character shortcut; use an mc method");
    }
    return exact_uniform_finite(desc, f);
}

ConsistencyReport check_consistency(const GroupDescriptor& desc, const MeasureSpec& measure,
                                    const TameSubgroupoid& coarse, const TameSubgroupoid& fine,
                                    const std::vector<std::vector<CharLabel>>& battery,
                                    const McParams& mc) {
    const auto decomposition = subgroupoid_leq(coarse, fine);
    if (!decomposition) throw NotComparable("subgroupoids are not nested");

    ConsistencyReport report;
    auto record = [&report](std::string what, double discrepancy, double tolerance) {
        const bool pass = discrepancy <= tolerance;
        report.pass = report.pass && pass;
        report.max_discrepancy = std::max(report.max_discrepancy, discrepancy);
        report.checks.push_back(ConsistencyCheck{std::move(what), discrepancy, tolerance, pass});
    };

    if (const auto* family = std::get_if<FiniteFamilyMeasure>(&measure)) {
        const std::vector<double>* coarse_table = nullptr;
        const std::vector<double>* fine_table = nullptr;
        for (const auto& [label, weights] : family->tables) {
            if (label == coarse) coarse_table = &weights;
            if (label == fine) fine_table = &weights;
        }
        if (!coarse_table || !fine_table) {
            throw Error("finite family lacks a table for one of the subgroupoids");
        }
        const auto pushed = pushforward(desc, coarse, fine, *fine_table);
        double worst = 0.0;
        for (std::size_t i = 0; i < pushed.size(); ++i) {
            worst = std::max(worst, std::abs(pushed[i] - (*coarse_table)[i]));
        }
        record("pushforward table vs stored table (all delta functions)", worst, 1e-12);
        return report;
    }

    if (desc.is_finite()) {
        // Uniform, finite kind: every fiber of the projection must have exactly
        // |G|^(m-n) points; this is the delta-table comparison in integer form.
        const std::uint64_t total = checked_power(desc.order, fine.size(), kExactLimit);
        const std::uint64_t image = checked_power(desc.order, coarse.size(), kExactLimit);
        const std::uint64_t expected = total / image;
        std::vector<std::uint64_t> counts(image, 0);
        std::vector<std::uint64_t> projected(coarse.size());
        for_each_residue_tuple(desc.order, fine.size(), [&](std::span<const std::uint64_t> tuple) {
            for (std::size_t i = 0; i < coarse.size(); ++i) {
                std::uint64_t acc = 0;
                for (const SignedRef& r : decomposition->per_generator[i]) {
                    const std::uint64_t v = tuple[r.index];
                    acc = (acc + (r.sign >= 0 ? v : (desc.order - v) % desc.order)) % desc.order;
                }
                projected[i] = acc;
            }
            ++counts[tuple_index(projected, desc.order)];
        });
        double worst = 0.0;
        bool uniform = true;
        for (const std::uint64_t c : counts) {
            uniform = uniform && (c == expected);
            const double diff = std::abs(static_cast<double>(c) / static_cast<double>(total) -
                                         1.0 / static_cast<double>(image));
            worst = std::max(worst, diff);
        }
        record("Haar fiber uniformity (all delta functions)", uniform ? 0.0 : worst, 0.0);
        return report;
    }

    // Uniform, Lie kind: Monte Carlo battery of character products.
    std::vector<std::vector<CharLabel>> tests = battery;
    if (tests.empty()) {
        const std::vector<CharLabel> defaults{1, 2};
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            for (const CharLabel l : defaults) {
                std::vector<CharLabel> labels(coarse.size(), 0);
                labels[i] = l;
                tests.push_back(std::move(labels));
            }
        }
    }
    std::uint64_t salt = 0;
    for (const auto& labels : tests) {
        if (labels.size() != coarse.size()) {
            throw Error("battery entry must carry one label per generator of the coarser subgroupoid");
        }
        const CylFunction f = make_cyl(coarse, Expression::character_product(labels));
        const CylFunction pulled = pullback(f, fine);
        McParams lhs_mc{mc.samples, derive_seed(mc.seed, salt++), mc.workers};
        McParams rhs_mc{mc.samples, derive_seed(mc.seed, salt++), mc.workers};
        const IntegralEstimate lhs = integrate(desc, pulled, UniformMeasure{}, lhs_mc);
        const IntegralEstimate rhs = integrate(desc, f, UniformMeasure{}, rhs_mc);
        const double diff = std::abs(lhs.mean - rhs.mean);
        const double tol = 3.0 * std::hypot(lhs.stderr_value, rhs.stderr_value);
        std::string what = "character battery [";
        for (std::size_t i = 0; i < labels.size(); ++i) {
            what += (i ? "," : "") + std::to_string(labels[i]);
        }
        what += "]";
        record(std::move(what), diff, tol);
    }
    return report;
}

std::vector<double> pushforward(const GroupDescriptor& desc, const TameSubgroupoid& coarse,
                                const TameSubgroupoid& fine, std::span<const double> table) {
    if (!desc.is_finite()) throw NotFinite("pushforward tables need a finite kind");
    const auto decomposition = subgroupoid_leq(coarse, fine);
    if (!decomposition) throw NotComparable("subgroupoids are not nested");
    const std::uint64_t total = checked_power(desc.order, fine.size(), 1u << 24);
    if (table.size() != total) {
        throw Error("table size " + std::to_string(table.size()) + " does not match |G|^m = " +
                    std::to_string(total));
    }
    std::vector<double> out(checked_power(desc.order, coarse.size(), 1u << 24), 0.0);
    std::vector<std::uint64_t> projected(coarse.size());
    std::size_t idx = 0;
    for_each_residue_tuple(desc.order, fine.size(), [&](std::span<const std::uint64_t> tuple) {
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            std::uint64_t acc = 0;
            for (const SignedRef& r : decomposition->per_generator[i]) {
                const std::uint64_t v = tuple[r.index];
                acc = (acc + (r.sign >= 0 ? v : (desc.order - v) % desc.order)) % desc.order;
            }
            projected[i] = acc;
        }
        out[tuple_index(projected, desc.order)] += table[idx++];
    });
    return out;
}

IntegralEstimate inner_product(const GroupDescriptor& desc, const AmbientAlphabet& alphabet,
                               const CylFunction& f, const CylFunction& h, const MeasureSpec& measure,
                               const Method& method) {
    if (f.label == h.label) {
        const CylFunction integrand =
            make_cyl(f.label, Expression::product({Expression::conjugate(f.expr), h.expr}));
        return integrate(desc, integrand, measure, method);
    }
    std::set<std::uint32_t> atom_set;
    for (const Edge& e : f.label.generators()) {
        for (const Letter& l : e.word().letters) atom_set.insert(l.atom);
    }
    for (const Edge& e : h.label.generators()) {
        for (const Letter& l : e.word().letters) atom_set.insert(l.atom);
    }
    std::vector<Edge> gens;
    for (const std::uint32_t a : atom_set) {
        gens.push_back(Edge::make(alphabet, reduce(alphabet, std::vector<Letter>{Letter{a, +1}})));
    }
    const TameSubgroupoid refinement = TameSubgroupoid::make(alphabet, std::move(gens));
    const CylFunction f_ref = pullback(f, refinement);
    const CylFunction h_ref = pullback(h, refinement);
    const CylFunction integrand =
        make_cyl(refinement, Expression::product({Expression::conjugate(f_ref.expr), h_ref.expr}));
    return integrate(desc, integrand, measure, method);
}

} // namespace gconn
