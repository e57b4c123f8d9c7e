#include "gconn/cyl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gconn/tuples.hpp"

namespace gconn {

namespace {

constexpr std::uint64_t kExactLimit = 1000000;

std::shared_ptr<const Expression::Node> wrap(Expression::Node::Variant node) {
    return std::make_shared<const Expression::Node>(Expression::Node{std::move(node)});
}

std::optional<std::size_t> merge_arity(std::optional<std::size_t> a, std::optional<std::size_t> b) {
    if (!a) return b;
    if (!b) return a;
    if (*a != *b) throw Error("combinator arguments have mismatched arities");
    return a;
}

} // namespace

Expression Expression::constant(Complex value) { return Expression(wrap(ConstantNode{value})); }

Expression Expression::character_product(std::vector<CharLabel> labels) {
    return Expression(wrap(CharProductNode{std::move(labels)}));
}

Expression Expression::finite_table(std::uint64_t order, std::size_t arity, std::vector<Complex> values) {
    if (order < 2) throw Error("finite table order must be >= 2");
    const std::uint64_t expected = checked_power(order, arity, 1u << 24);
    if (values.size() != expected) {
        throw Error("finite table must be total on G^n: expected " + std::to_string(expected) +
                    " entries, got " + std::to_string(values.size()));
    }
    return Expression(wrap(FiniteTableNode{order, arity, std::move(values)}));
}

Expression Expression::matrix_poly(std::size_t arity, std::vector<MatPolyTerm> terms) {
    for (const MatPolyTerm& t : terms) {
        for (const MatVar& v : t.vars) {
            if (v.slot >= arity) throw Error("matrix polynomial variable references slot out of range");
            if (v.row > 1 || v.col > 1) throw Error("fundamental-representation entries are at most 2x2");
        }
    }
    return Expression(wrap(MatrixPolyNode{arity, std::move(terms)}));
}

Expression Expression::sum(std::vector<Expression> args) {
    if (args.empty()) throw Error("sum needs at least one argument");
    std::optional<std::size_t> arity;
    for (const Expression& e : args) arity = merge_arity(arity, e.arity());
    return Expression(wrap(SumNode{std::move(args)}));
}

Expression Expression::product(std::vector<Expression> args) {
    if (args.empty()) throw Error("product needs at least one argument");
    std::optional<std::size_t> arity;
    for (const Expression& e : args) arity = merge_arity(arity, e.arity());
    return Expression(wrap(ProductNode{std::move(args)}));
}

Expression Expression::conjugate(Expression arg) { return Expression(wrap(ConjugateNode{std::move(arg)})); }

Expression Expression::compose_slots(Expression inner, std::size_t outer_arity,
                                     std::vector<GeneratorWord> slot_map) {
    const auto inner_arity = inner.arity();
    if (inner_arity && *inner_arity != slot_map.size()) {
        throw Error("slot map must cover every inner slot");
    }
    for (const GeneratorWord& refs : slot_map) {
        for (const SignedRef& r : refs) {
            if (r.index >= outer_arity) throw Error("slot map references outer slot out of range");
        }
    }
    return Expression(wrap(ComposeNode{std::move(inner), outer_arity, std::move(slot_map)}));
}

Expression Expression::slot_multiply(Expression inner, std::vector<GroupElement> left,
                                     std::vector<GroupElement> right) {
    if (left.size() != right.size()) throw Error("slot multipliers must pair up");
    const auto inner_arity = inner.arity();
    if (inner_arity && *inner_arity != left.size()) {
        throw Error("slot multipliers must cover every inner slot");
    }
    return Expression(wrap(SlotMulNode{std::move(inner), std::move(left), std::move(right)}));
}

std::optional<std::size_t> Expression::arity() const {
    struct Visitor {
        std::optional<std::size_t> operator()(const ConstantNode&) const { return std::nullopt; }
        std::optional<std::size_t> operator()(const CharProductNode& n) const { return n.labels.size(); }
        std::optional<std::size_t> operator()(const FiniteTableNode& n) const { return n.arity; }
        std::optional<std::size_t> operator()(const MatrixPolyNode& n) const { return n.arity; }
        std::optional<std::size_t> operator()(const SumNode& n) const {
            std::optional<std::size_t> a;
            for (const Expression& e : n.args) a = merge_arity(a, e.arity());
            return a;
        }
        std::optional<std::size_t> operator()(const ProductNode& n) const {
            std::optional<std::size_t> a;
            for (const Expression& e : n.args) a = merge_arity(a, e.arity());
            return a;
        }
        std::optional<std::size_t> operator()(const ConjugateNode& n) const { return n.arg.arity(); }
        std::optional<std::size_t> operator()(const ComposeNode& n) const { return n.outer_arity; }
        std::optional<std::size_t> operator()(const SlotMulNode& n) const { return n.left.size(); }
    };
    return std::visit(Visitor{}, node_->v);
}

Complex Expression::eval(std::span<const GroupElement> slots) const {
    struct Visitor {
        std::span<const GroupElement> slots;

        Complex operator()(const ConstantNode& n) const { return n.value; }

        Complex operator()(const CharProductNode& n) const {
            if (slots.size() != n.labels.size()) throw Error("character product arity mismatch");
            Complex out{1.0, 0.0};
            for (std::size_t i = 0; i < n.labels.size(); ++i) {
                out *= character(descriptor_of(slots[i]), n.labels[i], slots[i]);
            }
            return out;
        }

        Complex operator()(const FiniteTableNode& n) const {
            if (slots.size() != n.arity) throw Error("finite table arity mismatch");
            std::uint64_t idx = 0;
            for (const GroupElement& g : slots) {
                const auto& z = g.as_zn();
                if (z.order != n.order) {
                    throw KindMismatch("finite table defined on Z_" + std::to_string(n.order) +
                                       ", got Z_" + std::to_string(z.order));
                }
                idx = idx * n.order + z.residue;
            }
            return n.values[idx];
        }

        Complex operator()(const MatrixPolyNode& n) const {
            if (slots.size() != n.arity) throw Error("matrix polynomial arity mismatch");
            std::vector<FundamentalRep> reps;
            reps.reserve(slots.size());
            for (const GroupElement& g : slots) reps.push_back(fundamental_matrix(g));
            Complex out{0.0, 0.0};
            for (const MatPolyTerm& t : n.terms) {
                Complex term = t.coeff;
                for (const MatVar& v : t.vars) {
                    const FundamentalRep& rep = reps[v.slot];
                    if (static_cast<int>(v.row) >= rep.dim || static_cast<int>(v.col) >= rep.dim) {
                        throw Error("matrix polynomial entry out of range for this kind");
                    }
                    const Complex entry = rep.at(v.row, v.col);
                    const double part = v.imag_part ? entry.imag() : entry.real();
                    double factor = 1.0;
                    for (std::uint32_t p = 0; p < v.power; ++p) factor *= part;
                    term *= factor;
                }
                out += term;
            }
            return out;
        }

        Complex operator()(const SumNode& n) const {
            Complex out{0.0, 0.0};
            for (const Expression& e : n.args) out += e.eval(slots);
            return out;
        }

        Complex operator()(const ProductNode& n) const {
            Complex out{1.0, 0.0};
            for (const Expression& e : n.args) out *= e.eval(slots);
            return out;
        }

        Complex operator()(const ConjugateNode& n) const { return std::conj(n.arg.eval(slots)); }

        Complex operator()(const ComposeNode& n) const {
            if (slots.size() != n.outer_arity) throw Error("composed expression arity mismatch");
            std::vector<GroupElement> inner_slots;
            inner_slots.reserve(n.slot_map.size());
            for (const GeneratorWord& refs : n.slot_map) {
                if (refs.empty()) {
                    if (slots.empty()) throw Error("cannot synthesize an identity without a slot kind");
                    inner_slots.push_back(identity_like(slots[0]));
                    continue;
                }
                GroupElement h = signed_power(slots[refs[0].index], refs[0].sign);
                for (std::size_t i = 1; i < refs.size(); ++i) {
                    h = compose(signed_power(slots[refs[i].index], refs[i].sign), h);
                }
                inner_slots.push_back(std::move(h));
            }
            return n.inner.eval(inner_slots);
        }

        Complex operator()(const SlotMulNode& n) const {
            if (slots.size() != n.left.size()) throw Error("slot multiplier arity mismatch");
            std::vector<GroupElement> transformed;
            transformed.reserve(slots.size());
            for (std::size_t i = 0; i < slots.size(); ++i) {
                transformed.push_back(compose(compose(n.left[i], slots[i]), n.right[i]));
            }
            return n.inner.eval(transformed);
        }
    };
    return std::visit(Visitor{slots}, node_->v);
}

CylFunction make_cyl(TameSubgroupoid label, Expression expr) {
    const auto arity = expr.arity();
    if (arity && *arity != label.size()) {
        throw Error("expression arity " + std::to_string(*arity) + " does not match generator count " +
                    std::to_string(label.size()));
    }
    return CylFunction{std::move(label), std::move(expr)};
}

Complex eval_cyl(const CylFunction& f, const AmbientConnection& conn) {
    const Chart chart = coordinates(conn, f.label);
    return f.expr.eval(chart.values);
}

CylFunction pullback(const CylFunction& f, const TameSubgroupoid& fine) {
    auto decomposition = subgroupoid_leq(f.label, fine);
    if (!decomposition) {
        throw NotComparable("function label does not factor over the target subgroupoid");
    }
    if (fine == f.label) return f;
    Expression expr =
        Expression::compose_slots(f.expr, fine.size(), std::move(decomposition->per_generator));
    return CylFunction{fine, std::move(expr)};
}

CylFunction rewrite_over_paths(const AmbientAlphabet& alphabet, const Expression& f_expr,
                               std::span<const PathWord> paths) {
    const auto arity = f_expr.arity();
    if (arity && *arity != paths.size()) {
        throw Error("expression arity does not match the number of paths");
    }

    std::vector<PathWord> normalized;
    normalized.reserve(paths.size());
    for (const PathWord& p : paths) normalized.push_back(reduce(alphabet, p.letters, p.base));

    // If the paths already form an independent edge set, keep F as is.
    bool all_edges = !normalized.empty();
    std::vector<Edge> edges;
    for (const PathWord& p : normalized) {
        if (p.letters.empty() || !is_simple(alphabet, p)) {
            all_edges = false;
            break;
        }
        edges.push_back(Edge::make(alphabet, p));
    }
    if (all_edges && is_independent(alphabet, edges)) {
        return make_cyl(TameSubgroupoid::make(alphabet, std::move(edges)), f_expr);
    }

    std::set<std::uint32_t> atom_set;
    for (const PathWord& p : normalized) {
        for (const Letter& l : p.letters) atom_set.insert(l.atom);
    }
    if (atom_set.empty()) {
        throw NotDecomposable("paths traverse no atoms; nothing to decompose over");
    }
    std::vector<std::uint32_t> atoms(atom_set.begin(), atom_set.end());
    std::vector<Edge> gens;
    std::map<std::uint32_t, std::uint32_t> slot_of;
    for (const std::uint32_t a : atoms) {
        slot_of[a] = static_cast<std::uint32_t>(gens.size());
        gens.push_back(Edge::make(alphabet, reduce(alphabet, std::vector<Letter>{Letter{a, +1}})));
    }
    std::vector<GeneratorWord> slot_map;
    slot_map.reserve(normalized.size());
    for (const PathWord& p : normalized) {
        GeneratorWord refs;
        refs.reserve(p.letters.size());
        for (const Letter& l : p.letters) refs.push_back(SignedRef{slot_of[l.atom], l.sign});
        slot_map.push_back(std::move(refs));
    }
    Expression expr = Expression::compose_slots(f_expr, gens.size(), std::move(slot_map));
    return make_cyl(TameSubgroupoid::make(alphabet, std::move(gens)), std::move(expr));
}

SupNormEstimate sup_norm(const GroupDescriptor& desc, const CylFunction& f, const Method& method) {
    const std::size_t arity = f.label.size();
    if (const auto* mc = std::get_if<McParams>(&method)) {
        RngStream rng(mc->seed, 0);
        std::vector<GroupElement> slots;
        double best = 0.0;
        for (std::uint64_t i = 0; i < mc->samples; ++i) {
            slots.clear();
            for (std::size_t s = 0; s < arity; ++s) slots.push_back(haar_sample(desc, rng));
            best = std::max(best, std::abs(f.expr.eval(slots)));
        }
        return SupNormEstimate{best, false, mc->samples, mc->seed};
    }
    if (!desc.is_finite()) {
        throw TooLargeForExact("exact sup-norm needs a finite kind; use a sampled method for " +
                               std::string(kind_name(desc.kind)));
    }
    const std::uint64_t count = checked_power(desc.order, arity, kExactLimit);
    double best = 0.0;
    std::vector<GroupElement> slots;
    for_each_residue_tuple(desc.order, arity, [&](std::span<const std::uint64_t> tuple) {
        slots.clear();
        for (const std::uint64_t r : tuple) slots.push_back(GroupElement::zn(desc.order, r));
        best = std::max(best, std::abs(f.expr.eval(slots)));
    });
    return SupNormEstimate{best, true, count, 0};
}

} // namespace gconn
