#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gconn/family.hpp"
#include "gconn/groupoid.hpp"
#include "gconn/groups.hpp"
#include "gconn/method.hpp"

namespace gconn {

/// One factor of a matrix-polynomial monomial: a real or imaginary part of a
/// fundamental-representation entry of one slot, raised to a power.
struct MatVar {
    std::uint32_t slot;
    std::uint8_t row;
    std::uint8_t col;
    bool imag_part;
    std::uint32_t power;
};

struct MatPolyTerm {
    Complex coeff;
    std::vector<MatVar> vars;
};

class Expression;

struct ConstantNode {
    Complex value;
};

/// Product over slots of chi_{labels[i]}(g_i).
struct CharProductNode {
    std::vector<CharLabel> labels;
};

/// Total function on Z_order^arity; values indexed with the first slot most
/// significant: index = sum_i residue_i * order^(arity-1-i).
struct FiniteTableNode {
    std::uint64_t order;
    std::size_t arity;
    std::vector<Complex> values;
};

struct MatrixPolyNode {
    std::size_t arity;
    std::vector<MatPolyTerm> terms;
};

struct SumNode {
    std::vector<Expression> args;
};

struct ProductNode {
    std::vector<Expression> args;
};

struct ConjugateNode;

/// Pullback closure: outer slots are mapped through signed products into the
/// inner expression's slots (the pi_{n,m} coordinate map).
struct ComposeNode;

/// Per-slot boundary multiplication g_i -> left_i * g_i * right_i before the
/// inner expression; the closure of gauge-acted functions.
struct SlotMulNode;

/// Closed combinator grammar over group-valued slots. Immutable; cheap to copy.
class Expression {
public:
    struct Node; // defined below once the payload structs are complete

    static Expression constant(Complex value);
    static Expression character_product(std::vector<CharLabel> labels);
    static Expression finite_table(std::uint64_t order, std::size_t arity, std::vector<Complex> values);
    static Expression matrix_poly(std::size_t arity, std::vector<MatPolyTerm> terms);
    static Expression sum(std::vector<Expression> args);
    static Expression product(std::vector<Expression> args);
    static Expression conjugate(Expression arg);
    static Expression compose_slots(Expression inner, std::size_t outer_arity,
                                    std::vector<GeneratorWord> slot_map);
    static Expression slot_multiply(Expression inner, std::vector<GroupElement> left,
                                    std::vector<GroupElement> right);

    /// Slot count; empty for constants, which fit any arity.
    std::optional<std::size_t> arity() const;

    Complex eval(std::span<const GroupElement> slots) const;

    const Node& node() const;

private:
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ConjugateNode {
    Expression arg;
};

struct ComposeNode {
    Expression inner;
    std::size_t outer_arity;
    std::vector<GeneratorWord> slot_map; // one entry per inner slot
};

struct SlotMulNode {
    Expression inner;
    std::vector<GroupElement> left;
    std::vector<GroupElement> right;
};

struct Expression::Node {
    using Variant = std::variant<ConstantNode, CharProductNode, FiniteTableNode, MatrixPolyNode,
                                 SumNode, ProductNode, ConjugateNode, ComposeNode, SlotMulNode>;
    Variant v;
};

inline const Expression::Node& Expression::node() const { return *node_; }

/// F(A(e_1), ..., A(e_n)): an expression bound to an ordered independent edge set.
struct CylFunction {
    TameSubgroupoid label;
    Expression expr;
};

/// Checks the expression arity against the generator count.
CylFunction make_cyl(TameSubgroupoid label, Expression expr);

Complex eval_cyl(const CylFunction& f, const AmbientConnection& conn);

/// Rewrites f over the finer subgroupoid without changing it as a function.
/// Throws NotComparable when f's label does not factor over `fine`.
CylFunction pullback(const CylFunction& f, const TameSubgroupoid& fine);

/// Expresses F(A(p_1), ..., A(p_k)) over an independent edge set: the paths
/// themselves when they already form one, otherwise the underlying atoms.
CylFunction rewrite_over_paths(const AmbientAlphabet& alphabet, const Expression& f_expr,
                               std::span<const PathWord> paths);

struct SupNormEstimate {
    double value;
    bool exact;
    std::uint64_t samples; // enumeration size, or draw count for sampled
    std::uint64_t seed;    // sampled only
};

/// Exact max over G^n for finite kinds (|G|^n <= 10^6, else TooLargeForExact);
/// for sampled methods a lower-bound estimate over Haar draws.
SupNormEstimate sup_norm(const GroupDescriptor& desc, const CylFunction& f, const Method& method);

} // namespace gconn
