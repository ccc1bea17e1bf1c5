#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spectopo/constructible.hpp"

using namespace spectopo;

namespace {

const RingSpec Z = RingSpec::integers();

PrimeGen ig(long v) { return PrimeGen(Int(v)); }

RingElement elt(const RingSpec& ring, long v) { return RingElement::from_int(ring, Int(v)); }

ConstructibleSet cs(SpectrumSubset s) { return ConstructibleSet(std::move(s)); }

/// Random genuinely constructible set (finite, or cofinite with generic).
ConstructibleSet random_constructible(const RingSpec& ring, std::mt19937_64& rng) {
    std::vector<PrimeGen> pool;
    ClosedPrimeStream stream(ring);
    for (int i = 0; i < 25; ++i) {
        auto g = stream.next();
        if (!g) break;
        pool.push_back(*g);
    }
    std::uniform_int_distribution<size_t> count(0, 6);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    std::vector<PrimeGen> pts;
    for (size_t i = count(rng); i > 0; --i) pts.push_back(pool[pick(rng)]);
    pts = sorted_unique(std::move(pts));
    if (!ring.has_infinite_spectrum())
        return cs(SpectrumSubset::finite(ring, std::move(pts)));
    std::bernoulli_distribution coin(0.5);
    if (coin(rng)) return cs(SpectrumSubset::finite(ring, std::move(pts)));
    return cs(SpectrumSubset::cofinite(ring, std::move(pts), true));
}

} // namespace

TEST_CASE("constructible normal forms") {
    CHECK_THROWS_AS(cs(SpectrumSubset::progression(Z, 1, 4)), Error);
    CHECK_THROWS_AS(cs(SpectrumSubset::finite(Z, {ig(2)}, true)), Error);
    CHECK_NOTHROW(cs(SpectrumSubset::cofinite(Z, {ig(2)}, false)));
    CHECK_NOTHROW(cs(SpectrumSubset::cofinite(Z, {ig(2)}, true)));

    auto z12 = RingSpec::modular(12);
    CHECK_NOTHROW(cs(SpectrumSubset::finite(z12, {ig(2)})));
}

TEST_CASE("boolean operations") {
    auto v6 = cs(v_of(elt(Z, 6)));
    auto v10 = cs(v_of(elt(Z, 10)));
    CHECK(set_intersect(v6, v10).subset() == SpectrumSubset::finite(Z, {ig(2)}));

    auto d12 = cs(d_of(elt(Z, 12)));
    CHECK(set_complement(d12).subset() == v_of(elt(Z, 12)));

    auto d4 = cs(d_of(elt(Z, 4)));
    auto v4 = cs(v_of(elt(Z, 4)));
    CHECK(set_union(d4, v4).subset() == SpectrumSubset::all(Z));

    CHECK(boolean_op(BoolOp::Intersect, v6, &v10).subset() ==
          SpectrumSubset::finite(Z, {ig(2)}));
    CHECK_THROWS_AS(boolean_op(BoolOp::Union, v6), PreconditionError);

    // Complementing a trace-form set (cofinite without generic) escapes the
    // constructible family and is refused.
    auto trace_form = cs(SpectrumSubset::cofinite(Z, {ig(2)}, false));
    CHECK_THROWS_AS(set_complement(trace_form), Error);
}

TEST_CASE("basic constructible sets") {
    CHECK(basic_constructible(elt(Z, 1), Ideal::principal(elt(Z, 6))).subset() ==
          SpectrumSubset::finite(Z, {ig(2), ig(3)}));
    CHECK(basic_constructible(elt(Z, 2), Ideal::principal(elt(Z, 15))).subset() ==
          SpectrumSubset::finite(Z, {ig(3), ig(5)}));
    CHECK(basic_constructible(elt(Z, 6), Ideal::principal(elt(Z, 6))).subset() ==
          SpectrumSubset::empty(Z));
}

TEST_CASE("boolean algebra laws on random triples") {
    std::mt19937_64 rng(41);
    std::vector<RingSpec> rings{Z, RingSpec::modular(360), RingSpec::poly_field(2)};
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const RingSpec& ring = rings[static_cast<size_t>(i) % rings.size()];
        auto a = random_constructible(ring, rng);
        auto b = random_constructible(ring, rng);
        auto c = random_constructible(ring, rng);
        CHECK(set_union(a, b) == set_union(b, a));
        CHECK(set_intersect(a, b) == set_intersect(b, a));
        CHECK(set_union(set_union(a, b), c) == set_union(a, set_union(b, c)));
        CHECK(set_intersect(set_intersect(a, b), c) == set_intersect(a, set_intersect(b, c)));
        CHECK(set_intersect(a, set_union(b, c)) ==
              set_union(set_intersect(a, b), set_intersect(a, c)));
        CHECK(set_union(a, set_intersect(b, c)) ==
              set_intersect(set_union(a, b), set_union(a, c)));
        if (ring.has_infinite_spectrum()) {
            bool a_ok = !(a.subset().is_cofinite_form() && !a.subset().includes_generic());
            bool b_ok = !(b.subset().is_cofinite_form() && !b.subset().includes_generic());
            if (a_ok && b_ok) {
                CHECK(set_complement(set_complement(a)) == a);
                CHECK(set_complement(set_union(a, b)) ==
                      set_intersect(set_complement(a), set_complement(b)));
                CHECK(set_complement(set_intersect(a, b)) ==
                      set_union(set_complement(a), set_complement(b)));
            }
        } else {
            CHECK(set_complement(set_complement(a)) == a);
            CHECK(set_complement(set_union(a, b)) ==
                  set_intersect(set_complement(a), set_complement(b)));
        }
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("patch closure") {
    auto pr14 = SpectrumSubset::progression(Z, 1, 4);
    auto closed = patch_closure(pr14);
    CHECK(closed.includes_generic());
    CHECK(closed.describe_part() == pr14.describe_part());

    auto fin = SpectrumSubset::finite(Z, {ig(2), ig(3)});
    CHECK(patch_closure(fin) == fin);

    auto z12 = RingSpec::modular(12);
    auto sub = SpectrumSubset::finite(z12, {ig(2)});
    CHECK(patch_closure(sub) == sub);

    CHECK(is_patch_closed(v_of(elt(Z, 12))));
    CHECK(is_patch_closed(d_of(elt(Z, 12))));
    CHECK_FALSE(is_patch_closed(SpectrumSubset::progression(Z, 3, 4)));

    auto unknown = SpectrumSubset::custom_predicate(
        Z, [](const PrimeGen& g) { return std::get<Int>(g) % 7 == 1; }, "mod7", false);
    CHECK_THROWS_AS(patch_closure(unknown), UnknownInfinitudeError);
    CHECK_THROWS_AS(is_patch_closed(unknown), UnknownInfinitudeError);
}

TEST_CASE("patch closure is a closure operator distributing over unions") {
    std::mt19937_64 rng(43);
    std::vector<RingSpec> rings{Z, RingSpec::poly_field(3)};
    for (int i = 0; i < 120; ++i) {
        const RingSpec& ring = rings[static_cast<size_t>(i) % rings.size()];
        std::bernoulli_distribution coin(0.5);
        SpectrumSubset s = coin(rng)
                               ? random_constructible(ring, rng).subset()
                               : SpectrumSubset::progression(ring,
                                                             ring.kind() == RingKind::Integers
                                                                 ? 1 + 2 * (i % 2)
                                                                 : i % 3,
                                                             ring.kind() == RingKind::Integers
                                                                 ? 8
                                                                 : 3);
        auto c = patch_closure(s);
        CHECK(patch_closure(c) == c);
        if (auto sub = subset_of(s, c)) CHECK(*sub);
        auto t = random_constructible(ring, rng).subset();
        CHECK(patch_closure(unite(s, t)) == unite(patch_closure(s), patch_closure(t)));
        auto bigger = unite(s, t);
        auto cs_ = patch_closure(s);
        auto cb = patch_closure(bigger);
        if (auto sub = subset_of(cs_, cb)) CHECK(*sub);
    }
}

TEST_CASE("patch membership oracle") {
    CHECK(patch_membership(PrimeIdeal::generic(Z), SpectrumSubset::progression(Z, 3, 4)));
    CHECK_FALSE(patch_membership(PrimeIdeal::closed(Z, ig(3)),
                                 SpectrumSubset::finite(Z, {ig(2)})));
    CHECK(patch_membership(PrimeIdeal::closed(Z, ig(5)), d_of(elt(Z, 3))));
    CHECK_FALSE(patch_membership(PrimeIdeal::generic(Z),
                                 SpectrumSubset::finite(Z, {ig(2), ig(3)})));

    // Agreement with patch_closure membership on sampled pairs.
    std::mt19937_64 rng(47);
    std::vector<RingSpec> rings{Z, RingSpec::poly_field(2)};
    int agreements = 0;
    for (int i = 0; i < 200; ++i) {
        const RingSpec& ring = rings[static_cast<size_t>(i) % rings.size()];
        std::bernoulli_distribution coin(0.4);
        SpectrumSubset s =
            coin(rng) ? SpectrumSubset::progression(
                            ring, ring.kind() == RingKind::Integers ? 1 : 0, 4)
                      : random_constructible(ring, rng).subset();
        auto closure = patch_closure(s);
        std::vector<PrimeIdeal> pts;
        pts.push_back(PrimeIdeal::generic(ring));
        ClosedPrimeStream stream(ring);
        for (int k = 0; k < 8; ++k) pts.push_back(PrimeIdeal::closed(ring, *stream.next()));
        for (auto& p : pts) {
            CHECK(patch_membership(p, s) == closure.member(p));
            ++agreements;
        }
    }
    CHECK(agreements >= 200);
}

TEST_CASE("boolean subalgebra atoms") {
    auto v6 = cs(v_of(elt(Z, 6)));
    auto v10 = cs(v_of(elt(Z, 10)));
    auto alg = boolean_subalgebra(SpectrumSubset::all(Z), {v6, v10});
    REQUIRE(alg.atoms().size() == 4);
    CHECK(alg.atoms()[0].trace == SpectrumSubset::finite(Z, {ig(2)}));
    CHECK(alg.atoms()[1].trace == SpectrumSubset::finite(Z, {ig(3)}));
    CHECK(alg.atoms()[2].trace == SpectrumSubset::finite(Z, {ig(5)}));
    CHECK(alg.atoms()[3].trace == SpectrumSubset::cofinite(Z, {ig(2), ig(3), ig(5)}, true));
    CHECK(alg.atoms()[3].is_infinite());

    auto trivial = boolean_subalgebra(SpectrumSubset::all(Z), {});
    REQUIRE(trivial.atoms().size() == 1);
    CHECK(trivial.atoms()[0].trace == SpectrumSubset::all(Z));

    auto carrier = SpectrumSubset::finite(Z, {ig(2), ig(3), ig(5)});
    auto traced = boolean_subalgebra(carrier, {v6});
    REQUIRE(traced.atoms().size() == 2);
    CHECK(traced.atoms()[0].trace == SpectrumSubset::finite(Z, {ig(2), ig(3)}));
    CHECK(traced.atoms()[1].trace == SpectrumSubset::finite(Z, {ig(5)}));

    // Atoms partition the carrier and every generator is a union of atoms.
    std::mt19937_64 rng(53);
    for (int i = 0; i < 40; ++i) {
        std::vector<ConstructibleSet> gens;
        for (int g = 0; g < 3; ++g) gens.push_back(random_constructible(Z, rng));
        auto carrier2 = random_constructible(Z, rng).subset();
        auto a = boolean_subalgebra(carrier2, gens);
        SpectrumSubset whole = SpectrumSubset::empty(Z);
        for (size_t x = 0; x < a.atoms().size(); ++x) {
            CHECK_FALSE(a.atoms()[x].trace.is_empty());
            whole = unite(whole, a.atoms()[x].trace);
            for (size_t y = x + 1; y < a.atoms().size(); ++y)
                CHECK(intersect(a.atoms()[x].trace, a.atoms()[y].trace).is_empty());
        }
        CHECK(whole == carrier2);
        for (auto& g : gens) {
            SpectrumSubset from_atoms = SpectrumSubset::empty(Z);
            for (auto& atom : a.atoms()) {
                auto inter = intersect(atom.trace, g.subset());
                if (!(inter.is_empty())) {
                    CHECK(inter == atom.trace);
                    from_atoms = unite(from_atoms, atom.trace);
                }
            }
            CHECK(from_atoms == intersect(carrier2, g.subset()));
        }
    }

    // Predicate carrier with declared infinitude works; unknown refuses.
    auto pr = SpectrumSubset::progression(Z, 1, 4);
    auto alg_pr = boolean_subalgebra(pr, {v6});
    CHECK(alg_pr.atoms().size() >= 1);
    auto unknown = SpectrumSubset::custom_predicate(
        Z, [](const PrimeGen& g) { return std::get<Int>(g) % 7 == 1; }, "mod7", false);
    CHECK_THROWS_AS(boolean_subalgebra(unknown, {v6}), UnknownInfinitudeError);
}
