#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spectopo/ultrafilter.hpp"

using namespace spectopo;

namespace {

const RingSpec Z = RingSpec::integers();

PrimeGen ig(long v) { return PrimeGen(Int(v)); }

RingElement elt(const RingSpec& ring, long v) { return RingElement::from_int(ring, Int(v)); }

SpectrumSubset all_closed(const RingSpec& ring) {
    return SpectrumSubset::cofinite(ring, {}, false);
}

} // namespace

TEST_CASE("ultrafilter axiom checker") {
    CHECK(check_ultrafilter_axioms(2, {0b01, 0b11}).ok); // principal at element 0
    auto bad = check_ultrafilter_axioms(2, {0b01, 0b10, 0b11});
    CHECK_FALSE(bad.ok);
    CHECK(bad.violated_axiom == 3);
    CHECK(((bad.witness_a == 0b01 && bad.witness_b == 0b10) ||
           (bad.witness_a == 0b10 && bad.witness_b == 0b01)));
    CHECK(check_ultrafilter_axioms(1, {0b1}).ok);
    CHECK_FALSE(check_ultrafilter_axioms(2, {}).ok);
    CHECK(check_ultrafilter_axioms(2, {}).violated_axiom == 0);
    // Missing superset: {0} present, {0,1} missing.
    auto up = check_ultrafilter_axioms(2, {0b01});
    CHECK_FALSE(up.ok);
    CHECK(up.violated_axiom == 1);
    // Empty set member trips the dichotomy with A = B = empty.
    auto empty_in = check_ultrafilter_axioms(1, {0b0, 0b1});
    CHECK_FALSE(empty_in.ok);
    CHECK(empty_in.violated_axiom == 3);
    CHECK_THROWS_AS(check_ultrafilter_axioms(21, {0b1}), BoundError);
}

TEST_CASE("enumerate_ultrafilters finds exactly the principal ones") {
    for (size_t n = 1; n <= 3; ++n) {
        auto filters = enumerate_ultrafilters(n);
        REQUIRE(filters.size() == n);
        // Brute force over all families of subsets.
        const uint32_t subsets = 1u << n;
        size_t found = 0;
        for (uint64_t fam = 1; fam < (1ull << subsets); ++fam) {
            std::vector<uint32_t> members;
            for (uint32_t m = 0; m < subsets; ++m)
                if ((fam >> m) & 1) members.push_back(m);
            if (check_ultrafilter_axioms(n, members).ok) {
                ++found;
                bool matches_enumerated = false;
                for (auto& u : filters)
                    if (u.members() == members) matches_enumerated = true;
                CHECK(matches_enumerated);
            }
        }
        CHECK(found == n);
        for (auto& u : filters) CHECK(u.principal_point() < n);
    }
    CHECK_THROWS_AS(enumerate_ultrafilters(6), BoundError);
}

TEST_CASE("ultrafilter limits") {
    // Principal.
    auto z12 = RingSpec::modular(12);
    auto u3 = UltrafilterDescriptor::principal(SpectrumSubset::all(z12),
                                               PrimeIdeal::closed(z12, ig(3)));
    CHECK(u3.limit() == PrimeIdeal::closed(z12, ig(3)));
    CHECK(u3.limit_contains(elt(z12, 9)).in_limit);
    CHECK_FALSE(u3.limit_contains(elt(z12, 2)).in_limit);

    // Nonprincipal on a progression: the limit is the generic point and the
    // membership verdict for 5 carries the finite-trace evidence.
    auto pr = SpectrumSubset::progression(Z, 1, 4);
    auto u = UltrafilterDescriptor::nonprincipal(pr);
    CHECK(u.limit() == PrimeIdeal::generic(Z));
    auto v5 = u.limit_contains(elt(Z, 5));
    CHECK_FALSE(v5.in_limit);
    CHECK(v5.trace == SpectrumSubset::finite(Z, {ig(5)}));
    CHECK_FALSE(v5.path.empty());
    CHECK(u.limit_contains(RingElement::zero(Z)).in_limit);

    // Nonprincipal on all closed primes.
    auto uall = UltrafilterDescriptor::nonprincipal(all_closed(Z));
    CHECK(uall.limit() == PrimeIdeal::generic(Z));

    // Errors.
    CHECK_THROWS_AS(
        UltrafilterDescriptor::nonprincipal(SpectrumSubset::finite(Z, {ig(2), ig(3)})),
        InvalidDescriptorError);
    CHECK_THROWS_AS(UltrafilterDescriptor::nonprincipal(SpectrumSubset::all(z12)),
                    InvalidDescriptorError);
    CHECK_THROWS_AS(UltrafilterDescriptor::principal(SpectrumSubset::finite(Z, {ig(2)}),
                                                     PrimeIdeal::closed(Z, ig(5))),
                    PreconditionError);
}

TEST_CASE("limit primality reports") {
    auto u3 = UltrafilterDescriptor::principal(all_closed(Z), PrimeIdeal::closed(Z, ig(3)));
    CHECK(limit_primality_check(u3, 100, 1).pass());

    auto uall = UltrafilterDescriptor::nonprincipal(all_closed(Z));
    CHECK(limit_primality_check(uall, 1000, 2).pass());

    auto gf2 = RingSpec::poly_field(2);
    auto upoly = UltrafilterDescriptor::nonprincipal(all_closed(gf2));
    CHECK(limit_primality_check(upoly, 1000, 3).pass());
}

TEST_CASE("induced ultrafilters") {
    // Principal restriction and extension.
    auto pt = PrimeIdeal::closed(Z, ig(5));
    auto u = UltrafilterDescriptor::principal(SpectrumSubset::all(Z), pt);
    auto c1 = SpectrumSubset::finite(Z, {ig(5), ig(7)});
    auto u1 = u.induce_on_member(c1);
    CHECK(u1.carrier() == c1);
    CHECK(u1.limit() == pt);
    auto ul = u1.induce_on_superset(SpectrumSubset::all(Z));
    CHECK(ul.limit() == pt);

    // Restriction to a set missing the point is refused.
    CHECK_THROWS_AS(u.induce_on_member(SpectrumSubset::finite(Z, {ig(2)})),
                    PreconditionError);

    // Nonprincipal restriction to a selected progression.
    auto uall = UltrafilterDescriptor::nonprincipal(all_closed(Z));
    auto pr = SpectrumSubset::progression(Z, 1, 4);
    REQUIRE(uall.member(pr)); // lex-min picks the progression side here
    auto upr = uall.induce_on_member(pr);
    CHECK(upr.carrier() == pr);
    CHECK(upr.limit() == PrimeIdeal::generic(Z));
    CHECK(upr.limit_contains(RingElement::zero(Z)).in_limit);
    CHECK_FALSE(upr.limit_contains(elt(Z, 5)).in_limit);

    // Identity cases.
    auto usame = uall.induce_on_superset(all_closed(Z));
    CHECK(usame.carrier() == all_closed(Z));
    CHECK(usame.limit() == uall.limit());

    // Superset extension keeps the limit.
    auto uext = upr.induce_on_superset(SpectrumSubset::all(Z));
    CHECK(uext.limit() == PrimeIdeal::generic(Z));

    // Once the complement is selected (lex-max picks it on this query), the
    // member induction must refuse.
    auto u2 = UltrafilterDescriptor::nonprincipal(all_closed(Z), lex_max_rule());
    auto comp = difference(all_closed(Z), pr);
    REQUIRE(u2.member(comp));
    CHECK_THROWS_AS(u2.induce_on_member(pr), PreconditionError);

    // Coherence: rejecting the complement forces the progression in.
    auto u3 = UltrafilterDescriptor::nonprincipal(all_closed(Z));
    CHECK_FALSE(u3.member(comp));
    CHECK(u3.member(pr));
}

TEST_CASE("descriptor restricted to a finite subalgebra is an ultrafilter") {
    auto v6 = ConstructibleSet(v_of(elt(Z, 6)));
    auto v10 = ConstructibleSet(v_of(elt(Z, 10)));
    auto v77 = ConstructibleSet(v_of(elt(Z, 77)));
    auto alg = boolean_subalgebra(SpectrumSubset::all(Z), {v6, v10, v77});
    REQUIRE(alg.atoms().size() <= 6);

    std::vector<UltrafilterDescriptor> descriptors;
    descriptors.push_back(UltrafilterDescriptor::nonprincipal(all_closed(Z)));
    descriptors.push_back(UltrafilterDescriptor::nonprincipal(all_closed(Z), lex_max_rule()));
    descriptors.push_back(
        UltrafilterDescriptor::principal(SpectrumSubset::all(Z), PrimeIdeal::closed(Z, ig(7))));
    descriptors.push_back(
        UltrafilterDescriptor::principal(SpectrumSubset::all(Z), PrimeIdeal::generic(Z)));
    for (auto& d : descriptors) {
        auto family = descriptor_trace_family(d, alg);
        auto check = check_ultrafilter_axioms(alg.atoms().size(), family);
        INFO(check.message);
        CHECK(check.ok);
    }
}

TEST_CASE("ultrafilter closure") {
    auto fin = SpectrumSubset::finite(Z, {ig(2), ig(3), ig(5)});
    CHECK(ultrafilter_closure(fin) == fin);

    auto pr = SpectrumSubset::progression(Z, 3, 4);
    auto closed = ultrafilter_closure(pr);
    CHECK(closed.includes_generic());
    CHECK(closed.describe_part() == pr.describe_part());

    auto d6 = d_of(elt(Z, 6));
    CHECK(ultrafilter_closure(d6) == d6);

    auto z12 = RingSpec::modular(12);
    auto sub = SpectrumSubset::finite(z12, {ig(2)});
    CHECK(ultrafilter_closure(sub) == sub);

    auto unknown = SpectrumSubset::custom_predicate(
        Z, [](const PrimeGen& g) { return std::get<Int>(g) % 7 == 1; }, "mod7", false);
    CHECK_THROWS_AS(ultrafilter_closure(unknown), UnknownInfinitudeError);

    // Closure-operator laws on sampled inputs.
    std::mt19937_64 rng(59);
    ClosedPrimeStream stream(Z);
    std::vector<PrimeGen> pool;
    for (int i = 0; i < 30; ++i) pool.push_back(*stream.next());
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 80; ++i) {
        std::vector<PrimeGen> pts;
        for (int k = 0; k < 4; ++k) pts.push_back(pool[pick(rng)]);
        std::bernoulli_distribution coin(0.5);
        SpectrumSubset s = coin(rng)
                               ? SpectrumSubset::finite(Z, sorted_unique(std::move(pts)))
                               : SpectrumSubset::cofinite(Z, sorted_unique(std::move(pts)),
                                                          coin(rng));
        auto c = ultrafilter_closure(s);
        CHECK(ultrafilter_closure(c) == c);
        if (auto sub2 = subset_of(s, c)) CHECK(*sub2);
        SpectrumSubset t = SpectrumSubset::progression(Z, 1, 4);
        CHECK(ultrafilter_closure(unite(s, t)) ==
              unite(ultrafilter_closure(s), ultrafilter_closure(t)));
    }
}

TEST_CASE("witness ultrafilter") {
    auto pr = SpectrumSubset::progression(Z, 1, 4);
    auto w = witness_ultrafilter(pr);
    CHECK(w.witness == PrimeIdeal::generic(Z));
    CHECK(w.ultrafilter.limit() == w.witness);
    REQUIRE(w.log.is_array());
    bool has_pool = false, has_base = false, has_verify = false;
    for (auto& entry : w.log) {
        if (entry["stage"] == "witness-pool") has_pool = true;
        if (entry["stage"] == "filter-base") has_base = true;
        if (entry["stage"] == "verify") has_verify = true;
    }
    CHECK(has_pool);
    CHECK(has_base);
    CHECK(has_verify);

    auto gf3 = RingSpec::poly_field(3);
    auto w2 = witness_ultrafilter(all_closed(gf3));
    CHECK(w2.witness == PrimeIdeal::generic(gf3));

    CHECK_THROWS_AS(witness_ultrafilter(SpectrumSubset::finite(Z, {ig(2), ig(3)})),
                    NoWitnessError);
    CHECK_THROWS_AS(witness_ultrafilter(d_of(elt(Z, 6))), NoWitnessError);

    // Re-verify the witness limit by sampled membership.
    std::mt19937_64 rng(61);
    for (auto& rule : standard_selection_rules(4)) {
        auto wr = witness_ultrafilter(pr, rule);
        for (int i = 0; i < 50; ++i) {
            RingElement e = random_element(Z, rng);
            CHECK(wr.ultrafilter.limit_contains(e).in_limit == wr.witness.contains(e));
        }
    }
}

TEST_CASE("membership verdict evidence reconstructs the decision") {
    auto u = UltrafilterDescriptor::nonprincipal(all_closed(Z));
    auto v = u.limit_contains(elt(Z, 30));
    CHECK(v.trace == SpectrumSubset::finite(Z, {ig(2), ig(3), ig(5)}));
    CHECK_FALSE(v.in_limit);
    CHECK(v.to_json()["in_limit"] == false);
    CHECK(v.to_json()["element"] == "30");

    auto j = u.to_json();
    REQUIRE(j.contains("nonprincipal"));
    CHECK(j["nonprincipal"]["rule"] == "lex-min");

    auto z12 = RingSpec::modular(12);
    auto up = UltrafilterDescriptor::principal(SpectrumSubset::all(z12),
                                               PrimeIdeal::closed(z12, ig(3)));
    CHECK(up.to_json()["principal"] == "(3)");
}
