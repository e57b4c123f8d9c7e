#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gconn/basis.hpp"
#include "gconn/symmetry.hpp"
#include "support/enumerate.hpp"
#include "support/generators.hpp"

using namespace gconn;
using namespace gconn::testing;

namespace {

const GroupDescriptor kZ2 = GroupDescriptor::cyclic(2);
const GroupDescriptor kZ3 = GroupDescriptor::cyclic(3);
const GroupDescriptor kSu2 = GroupDescriptor::special_unitary2();

Letter pos(std::uint32_t atom) { return Letter{atom, +1}; }

GaugeTransformation random_gauge(RngStream& rng, const AmbientAlphabet& alphabet,
                                 const GroupDescriptor& desc) {
    std::map<std::uint32_t, GroupElement> values;
    for (std::uint32_t v = 0; v < alphabet.vertex_count(); ++v) {
        if (rng.uniform01() < 0.7) values.emplace(v, haar_sample(desc, rng));
    }
    return make_gauge(alphabet, desc, std::move(values));
}

CylFunction random_table_function(RngStream& rng, const GroupDescriptor& desc,
                                  const TameSubgroupoid& label) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < label.size(); ++i) count *= desc.order;
    std::vector<Complex> values;
    for (std::size_t i = 0; i < count; ++i) {
        values.push_back(Complex(rng.uniform01() * 2.0 - 1.0, rng.uniform01() * 2.0 - 1.0));
    }
    return make_cyl(label, Expression::finite_table(desc.order, label.size(), std::move(values)));
}

AmbientConnection act(const AmbientAlphabet& alphabet, const Transformation& t,
                      const AmbientConnection& conn) {
    if (const auto* g = std::get_if<GaugeTransformation>(&t)) return gauge_act(alphabet, *g, conn);
    return automorphism_act(alphabet, std::get<GroupoidAutomorphism>(t), conn);
}

AmbientConnection inverse_act(const AmbientAlphabet& alphabet, const Transformation& t,
                              const AmbientConnection& conn) {
    if (const auto* g = std::get_if<GaugeTransformation>(&t)) {
        GaugeTransformation inv{g->group, {}};
        for (const auto& [v, value] : g->values) inv.values.emplace(v, invert(value));
        return gauge_act(alphabet, inv, conn);
    }
    const auto& f = std::get<GroupoidAutomorphism>(t);
    return automorphism_act(alphabet, f.inverse(alphabet), conn);
}

} // namespace

TEST_CASE("gauge action conjugates holonomies at the endpoints") {
    const auto alphabet = path_alphabet(2);
    RngStream rng(3);

    SUBCASE("identity gauge changes nothing") {
        const AmbientConnection conn = random_connection(rng, alphabet, kSu2);
        const GaugeTransformation id = make_gauge(alphabet, kSu2, {});
        const AmbientConnection acted = gauge_act(alphabet, id, conn);
        for (std::size_t a = 0; a < conn.values.size(); ++a) {
            CHECK(approx_equal(acted.values[a], conn.values[a]));
        }
    }
    SUBCASE("support only at the range multiplies on the left") {
        const AmbientConnection conn = random_connection(rng, alphabet, kSu2);
        const PathWord e = reduce(alphabet, std::vector<Letter>{pos(0), pos(1)}); // v0 -> v2
        const GroupElement g = haar_sample(kSu2, rng);
        const GaugeTransformation gauge = make_gauge(alphabet, kSu2, {{2, g}});
        const AmbientConnection acted = gauge_act(alphabet, gauge, conn);
        CHECK(approx_equal(evaluate(acted, e), compose(g, evaluate(conn, e))));
    }
    SUBCASE("holonomies of random paths transform by endpoint conjugation") {
        for (const GroupDescriptor& desc : {kZ3, kSu2}) {
            for (int trial = 0; trial < 60; ++trial) {
                const AmbientAlphabet random_alpha = random_alphabet(rng);
                const AmbientConnection conn = random_connection(rng, random_alpha, desc);
                const GaugeTransformation gauge = random_gauge(rng, random_alpha, desc);
                const AmbientConnection acted = gauge_act(random_alpha, gauge, conn);
                const PathWord p = random_word(rng, random_alpha, 8);
                const GroupElement expected =
                    compose(compose(gauge_value(gauge, word_range(random_alpha, p)), evaluate(conn, p)),
                            invert(gauge_value(gauge, word_source(random_alpha, p))));
                CHECK(approx_equal(evaluate(acted, p), expected));
            }
        }
    }
    SUBCASE("acting twice equals acting by the pointwise product") {
        for (int trial = 0; trial < 40; ++trial) {
            const AmbientConnection conn = random_connection(rng, alphabet, kZ3);
            const GaugeTransformation g = random_gauge(rng, alphabet, kZ3);
            const GaugeTransformation h = random_gauge(rng, alphabet, kZ3);
            const AmbientConnection two_step = gauge_act(alphabet, h, gauge_act(alphabet, g, conn));
            const AmbientConnection one_step = gauge_act(alphabet, compose_gauges(h, g), conn);
            for (std::size_t a = 0; a < conn.values.size(); ++a) {
                CHECK(approx_equal(two_step.values[a], one_step.values[a]));
            }
        }
    }
}

TEST_CASE("automorphisms act by precomposition with the inverse") {
    const auto alphabet = path_alphabet(2);
    // swap the two atoms of v0 -a-> v1 -b-> v2 under the vertex flip v0 <-> v2
    const GroupoidAutomorphism swap = GroupoidAutomorphism::make(
        alphabet, {2, 1, 0}, {AtomImage{1, -1}, AtomImage{0, -1}});
    RngStream rng(7);

    SUBCASE("identity automorphism changes nothing") {
        const AmbientConnection conn = random_connection(rng, alphabet, kZ3);
        const auto id = GroupoidAutomorphism::identity_map(alphabet);
        const AmbientConnection acted = automorphism_act(alphabet, id, conn);
        for (std::size_t a = 0; a < conn.values.size(); ++a) {
            CHECK(approx_equal(acted.values[a], conn.values[a]));
        }
    }
    SUBCASE("a pure atom swap relabels holonomies") {
        const AmbientAlphabet parallel({"v0", "v1"}, {{"a", "v0", "v1"}, {"b", "v0", "v1"}});
        const GroupoidAutomorphism ab = GroupoidAutomorphism::make(
            parallel, {0, 1}, {AtomImage{1, +1}, AtomImage{0, +1}});
        const AmbientConnection conn = random_connection(rng, parallel, kSu2);
        const AmbientConnection acted = automorphism_act(parallel, ab, conn);
        CHECK(approx_equal(evaluate(acted, reduce(parallel, std::vector<Letter>{pos(0)})),
                           evaluate(conn, reduce(parallel, std::vector<Letter>{pos(1)}))));
    }
    SUBCASE("the defining identity (F A)(p) = A(F^-1 p) holds on random paths") {
        const GroupoidAutomorphism inv = swap.inverse(alphabet);
        for (int trial = 0; trial < 60; ++trial) {
            const AmbientConnection conn = random_connection(rng, alphabet, kSu2);
            const AmbientConnection acted = automorphism_act(alphabet, swap, conn);
            const PathWord p = random_word(rng, alphabet, 6);
            CHECK(approx_equal(evaluate(acted, p), evaluate(conn, apply_to_word(inv, p, alphabet))));
        }
    }
    SUBCASE("composition acts as a group action") {
        const auto autos = all_automorphisms(triangle_alphabet());
        const auto triangle = triangle_alphabet();
        CHECK(autos.size() >= 6); // rotations and reflections at least
        RngStream arng(11);
        for (int trial = 0; trial < 30; ++trial) {
            const auto& f = autos[arng.uniform_below(autos.size())];
            const auto& g = autos[arng.uniform_below(autos.size())];
            const AmbientConnection conn = random_connection(arng, triangle, kZ2);
            const AmbientConnection one =
                automorphism_act(triangle, compose_automorphisms(triangle, f, g), conn);
            const AmbientConnection two =
                automorphism_act(triangle, f, automorphism_act(triangle, g, conn));
            for (std::size_t a = 0; a < conn.values.size(); ++a) {
                CHECK(approx_equal(one.values[a], two.values[a]));
            }
        }
    }
    SUBCASE("incidence violations are rejected") {
        CHECK_THROWS_AS(GroupoidAutomorphism::make(alphabet, {2, 1, 0},
                                                   {AtomImage{1, +1}, AtomImage{0, +1}}),
                        AlphabetMismatch);
        CHECK_THROWS_AS(GroupoidAutomorphism::make(alphabet, {0, 1, 2},
                                                   {AtomImage{0, +1}, AtomImage{0, +1}}),
                        AlphabetMismatch);
    }
}

TEST_CASE("the function action matches the inverse action on connections") {
    const auto alphabet = path_alphabet(2);
    const TameSubgroupoid top = top_subgroupoid(alphabet);
    RngStream rng(13);
    const GroupoidAutomorphism swap = GroupoidAutomorphism::make(
        alphabet, {2, 1, 0}, {AtomImage{1, -1}, AtomImage{0, -1}});

    SUBCASE("identity transformation leaves values untouched") {
        const CylFunction f = random_table_function(rng, kZ3, top);
        const Transformation id_gauge = make_gauge(alphabet, kZ3, {});
        const CylFunction acted = act_on_function(alphabet, id_gauge, f);
        for (const AmbientConnection& conn : all_connections(alphabet, kZ3)) {
            CHECK(std::abs(eval_cyl(acted, conn) - eval_cyl(f, conn)) == 0.0);
        }
    }
    SUBCASE("defining property, both transformation types, exhaustive Z3") {
        const std::vector<Transformation> transforms{
            Transformation(random_gauge(rng, alphabet, kZ3)), Transformation(swap)};
        for (const Transformation& t : transforms) {
            const CylFunction f = random_table_function(rng, kZ3, top);
            const CylFunction acted = act_on_function(alphabet, t, f);
            for (const AmbientConnection& conn : all_connections(alphabet, kZ3)) {
                const Complex via_function = eval_cyl(acted, conn);
                const Complex via_connection = eval_cyl(f, inverse_act(alphabet, t, conn));
                CHECK(std::abs(via_function - via_connection) < 1e-12);
            }
        }
    }
    SUBCASE("su2 spot checks on random connections") {
        const CylFunction f = make_cyl(top, Expression::character_product({1, 2}));
        const std::vector<Transformation> transforms{
            Transformation(random_gauge(rng, alphabet, kSu2)), Transformation(swap)};
        for (const Transformation& t : transforms) {
            const CylFunction acted = act_on_function(alphabet, t, f);
            for (int trial = 0; trial < 20; ++trial) {
                const AmbientConnection conn = random_connection(rng, alphabet, kSu2);
                CHECK(std::abs(eval_cyl(acted, conn) -
                               eval_cyl(f, inverse_act(alphabet, t, conn))) < 1e-9);
            }
        }
    }
    SUBCASE("a table under an atom swap permutes its slots") {
        const AmbientAlphabet parallel({"v0", "v1"}, {{"a", "v0", "v1"}, {"b", "v0", "v1"}});
        const GroupoidAutomorphism ab = GroupoidAutomorphism::make(
            parallel, {0, 1}, {AtomImage{1, +1}, AtomImage{0, +1}});
        const CylFunction f =
            make_cyl(top_subgroupoid(parallel),
                     Expression::finite_table(2, 2, {Complex(1), Complex(2), Complex(3), Complex(4)}));
        const CylFunction acted = act_on_function(parallel, Transformation(ab), f);
        for (const AmbientConnection& conn : all_connections(parallel, kZ2)) {
            const AmbientConnection swapped =
                make_connection(parallel, kZ2, {conn.values[1], conn.values[0]});
            CHECK(eval_cyl(acted, conn) == eval_cyl(f, swapped));
        }
    }
}

TEST_CASE("uniform-measure invariance reports") {
    const auto alphabet = path_alphabet(3);
    const TameSubgroupoid top = top_subgroupoid(alphabet);
    RngStream rng(17);

    SUBCASE("identity transformation is exactly invariant") {
        const CylFunction f = random_table_function(rng, kZ3, top);
        const InvarianceReport report = invariance_report(
            kZ3, alphabet, f, Transformation(make_gauge(alphabet, kZ3, {})), ExactTag{});
        CHECK(report.pass);
        CHECK(report.discrepancy == 0.0);
    }
    SUBCASE("every gauge leaves Z3 table integrals unchanged, bitwise") {
        const CylFunction f = random_table_function(rng, kZ3, top);
        for (const GaugeTransformation& gauge : all_gauges(alphabet, kZ3)) {
            const InvarianceReport report =
                invariance_report(kZ3, alphabet, f, Transformation(gauge), ExactTag{});
            CHECK(report.pass);
            CHECK(report.discrepancy == 0.0);
        }
    }
    SUBCASE("every triangle automorphism leaves Z2 table integrals unchanged") {
        const auto triangle = triangle_alphabet();
        const CylFunction f = random_table_function(rng, kZ2, top_subgroupoid(triangle));
        for (const GroupoidAutomorphism& a : all_automorphisms(triangle)) {
            const InvarianceReport report =
                invariance_report(kZ2, triangle, f, Transformation(a), ExactTag{});
            CHECK(report.pass);
            CHECK(report.discrepancy == 0.0);
        }
    }
    SUBCASE("su2 matrix polynomial under an atom relabeling is 3-sigma invariant") {
        const AmbientAlphabet parallel({"v0", "v1"}, {{"a", "v0", "v1"}, {"b", "v0", "v1"}});
        const GroupoidAutomorphism ab = GroupoidAutomorphism::make(
            parallel, {0, 1}, {AtomImage{1, +1}, AtomImage{0, +1}});
        const CylFunction f = make_cyl(
            top_subgroupoid(parallel),
            Expression::matrix_poly(2, {MatPolyTerm{Complex(1.0, 0.0),
                                                    {MatVar{0, 0, 0, false, 2}, MatVar{1, 0, 1, true, 1}}},
                                        MatPolyTerm{Complex(0.5, 0.0), {MatVar{1, 1, 0, false, 1}}}}));
        const InvarianceReport report = invariance_report(
            kSu2, parallel, f, Transformation(ab), McParams{200000, 23, 2});
        CHECK(report.pass);
    }
}

TEST_CASE("the induced action is unitary") {
    const auto alphabet = path_alphabet(2);
    const TameSubgroupoid top = top_subgroupoid(alphabet);
    RngStream rng(29);
    const GroupoidAutomorphism swap = GroupoidAutomorphism::make(
        alphabet, {2, 1, 0}, {AtomImage{1, -1}, AtomImage{0, -1}});

    SUBCASE("exact on finite kinds") {
        for (int trial = 0; trial < 10; ++trial) {
            const CylFunction f = random_table_function(rng, kZ3, top);
            const CylFunction h = random_table_function(rng, kZ3, top);
            const std::vector<Transformation> transforms{
                Transformation(random_gauge(rng, alphabet, kZ3)), Transformation(swap)};
            for (const Transformation& t : transforms) {
                const CylFunction uf = act_on_function(alphabet, t, f);
                const CylFunction uh = act_on_function(alphabet, t, h);
                const IntegralEstimate before =
                    inner_product(kZ3, alphabet, f, h, UniformMeasure{}, ExactTag{});
                const IntegralEstimate after =
                    inner_product(kZ3, alphabet, uf, uh, UniformMeasure{}, ExactTag{});
                CHECK(before.mean.real() == after.mean.real());
                CHECK(before.mean.imag() == after.mean.imag());
            }
        }
    }
    SUBCASE("3-sigma on su2") {
        const CylFunction f = make_cyl(top, Expression::character_product({1, 0}));
        const CylFunction h = make_cyl(top, Expression::character_product({1, 2}));
        const Transformation t(random_gauge(rng, alphabet, kSu2));
        const CylFunction uf = act_on_function(alphabet, t, f);
        const CylFunction uh = act_on_function(alphabet, t, h);
        const IntegralEstimate before =
            inner_product(kSu2, alphabet, f, h, UniformMeasure{}, McParams{200000, 31, 1});
        const IntegralEstimate after =
            inner_product(kSu2, alphabet, uf, uh, UniformMeasure{}, McParams{200000, 32, 1});
        CHECK(std::abs(before.mean - after.mean) <=
              3.0 * std::hypot(before.stderr_value, after.stderr_value));
    }
}
