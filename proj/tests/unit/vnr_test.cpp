#include <catch2/catch_amalgamated.hpp>

#include "spectopo/vnr.hpp"
#include "test_oracles.hpp"

using namespace spectopo;

namespace {

RingElement elt(const RingSpec& ring, long v) { return RingElement::from_int(ring, Int(v)); }

} // namespace

TEST_CASE("punctual inverses in regular rings") {
    // Z/6 is already regular; T(Z/6) = F_2 x F_3.
    auto t = VnrRing::for_modulus(6);
    CHECK(t.punctual_inverse(t.embed(2)) == t.embed(2)); // 4*2 = 2 mod 6
    CHECK(t.punctual_inverse(t.zero()) == t.zero());
    VnrElem e12;
    e12.k = 2;
    e12.r[0] = 1;
    e12.r[1] = 2;
    CHECK(t.punctual_inverse(e12) == e12); // 2*2 = 1 mod 3

    // The defining equations hold everywhere.
    VnrElem a = t.zero();
    do {
        VnrElem x = t.punctual_inverse(a);
        CHECK(t.mul(t.mul(a, a), x) == a);
        CHECK(t.mul(t.mul(x, x), a) == x);
    } while (t.next_element(a));
}

TEST_CASE("try_punctual_inverse against exhaustive search") {
    auto z4 = RingSpec::modular(4);
    CHECK_FALSE(try_punctual_inverse(z4, elt(z4, 2)).has_value());

    auto z6 = RingSpec::modular(6);
    auto r = try_punctual_inverse(z6, elt(z6, 3));
    REQUIRE(r.has_value());
    CHECK(*r == elt(z6, 3));

    for (uint64_t n = 2; n <= 60; ++n) {
        auto ring = RingSpec::modular(Int(n));
        CHECK(try_punctual_inverse(ring, RingElement::one(ring)) == RingElement::one(ring));
        bool all_exist = true;
        for (uint64_t a = 0; a < n; ++a) {
            auto mine = try_punctual_inverse(ring, elt(ring, static_cast<long>(a)));
            auto naive = oracles::naive_punctual_inverses(n, a);
            if (mine) {
                REQUIRE(naive.size() == 1);
                CHECK(mine->as_int() == naive[0]);
            } else {
                CHECK(naive.empty());
                all_exist = false;
            }
        }
        CHECK(all_exist == is_von_neumann_regular(ring));
        CHECK(is_von_neumann_regular(ring) == is_squarefree(Int(n)));
    }
}

TEST_CASE("idempotents and principal generation") {
    auto t = VnrRing::for_modulus(6);
    CHECK(t.idempotent_of(t.embed(2)) == t.embed(4)); // e(2) = 4 in Z/6
    CHECK(t.idempotent_of(t.zero()) == t.zero());
    CHECK(t.idempotent_of(t.embed(5)) == t.one()); // 5 is a unit

    // a = 2, b = 3: e(2) + e(3)(1 - e(2)) = 1 and 2T + 3T = T.
    CHECK(t.principal_generator(t.embed(2), t.embed(3)) == t.one());
    CHECK(t.principal_generator(t.zero(), t.zero()) == t.zero());
    VnrElem a = t.zero();
    do {
        CHECK(t.principal_generator(a, a) == t.idempotent_of(a));
    } while (t.next_element(a));
}

TEST_CASE("exhaustive regular-ring laws for small moduli") {
    for (uint64_t n : {2, 4, 6, 12, 30, 36, 60, 97, 120}) {
        auto t = VnrRing::for_modulus(Int(n));
        auto rep = check_vnr_laws(t);
        INFO("n = " << n << ": " << rep.first_violation);
        CHECK(rep.pass());
    }
}

TEST_CASE("regular hull construction") {
    auto z12 = RingSpec::modular(12);
    auto hull = regular_hull(z12);
    CHECK(hull.t.component_primes() == std::vector<uint32_t>{2, 3});
    CHECK(hull.iota.apply(Int(7)).to_string() == "(1,1)");
    CHECK(hull.certificate.relations_hold);
    CHECK(hull.certificate.spectrum_bijection);
    CHECK_FALSE(hull.certificate.iota_injective); // 12 is not squarefree

    auto h6 = regular_hull(RingSpec::modular(6));
    CHECK(h6.certificate.iota_injective);
    CHECK(h6.iota.is_bijective());

    auto h4 = regular_hull(RingSpec::modular(4));
    CHECK(h4.t.component_primes() == std::vector<uint32_t>{2});
    CHECK_FALSE(h4.iota.is_injective());

    CHECK(hull.iota.verify_hom_laws(10000));
    CHECK_THROWS_AS(regular_hull(z12, Int(10)), BoundError);

    json j = hull.t.to_json();
    CHECK(j["modulus"] == "12");
    CHECK(j["components"] == json::array({2, 3}));
}

TEST_CASE("is_von_neumann_regular") {
    CHECK(is_von_neumann_regular(RingSpec::modular(30)));
    CHECK_FALSE(is_von_neumann_regular(RingSpec::modular(4)));
    CHECK(is_von_neumann_regular(RingSpec::modular(2)));
}

TEST_CASE("contraction certificates") {
    auto hull = regular_hull(RingSpec::modular(12));
    auto cert = contraction_map(hull.iota);
    CHECK(cert.pass());
    REQUIRE(cert.table.size() == 2);
    CHECK(cert.table[0].second == "(2)");
    CHECK(cert.table[1].second == "(3)");

    auto h7 = regular_hull(RingSpec::modular(7));
    auto c7 = contraction_map(h7.iota);
    CHECK(c7.pass());
    CHECK(c7.table.size() == 1);

    auto h30 = regular_hull(RingSpec::modular(30));
    auto c30 = contraction_map(h30.iota);
    CHECK(c30.pass());
    CHECK(c30.table.size() == 3);
}

TEST_CASE("comaximality of a and ax-1") {
    auto t = VnrRing::for_modulus(12);
    auto a = t.embed(2); // (0, 2)
    auto x = t.punctual_inverse(a);
    auto axm1 = t.sub(t.mul(a, x), t.one());
    CHECK(axm1.to_string() == "(1,0)"); // -1 in the first slot, 0 in the second
    CHECK(t.in_prime(a, 0));
    CHECK_FALSE(t.in_prime(a, 1));
    CHECK_FALSE(t.in_prime(axm1, 0));
    CHECK(t.in_prime(axm1, 1));
    CHECK(t.mul(a, axm1) == t.zero());

    // a = 0: ax-1 = -1 is a unit; a = 1: ax-1 = 0.
    auto zero_case = t.sub(t.mul(t.zero(), t.punctual_inverse(t.zero())), t.one());
    for (size_t i = 0; i < t.component_count(); ++i) CHECK_FALSE(t.in_prime(zero_case, i));
    auto one_case = t.sub(t.mul(t.one(), t.punctual_inverse(t.one())), t.one());
    for (size_t i = 0; i < t.component_count(); ++i) CHECK(t.in_prime(one_case, i));

    for (uint64_t n = 2; n <= 60; ++n) {
        auto rep = comaximal_cover_check(VnrRing::for_modulus(Int(n)));
        INFO("n = " << n);
        CHECK(rep.pass());
    }
}

TEST_CASE("epimorphism evidence") {
    auto rep = epimorphism_evidence(RingSpec::modular(6));
    CHECK(rep.at_most_one_everywhere);
    size_t f2_homs = 99, f5_homs = 99, zero_homs = 99;
    for (auto& t : rep.targets) {
        if (t.name == "Z/2") f2_homs = t.hom_count;
        if (t.name == "Z/5") f5_homs = t.hom_count;
        if (t.name == "0") zero_homs = t.hom_count;
    }
    CHECK(f2_homs == 1);  // kill the F_3 component
    CHECK(f5_homs == 0);  // no characteristic-compatible component
    CHECK(zero_homs == 1);

    CHECK_THROWS_AS(epimorphism_evidence(RingSpec::modular(12000)), BoundError);

    for (uint64_t n = 2; n <= 10; ++n)
        CHECK(epimorphism_evidence(RingSpec::modular(Int(n))).at_most_one_everywhere);
}

TEST_CASE("finite ring catalog sanity") {
    auto catalog = small_ring_catalog();
    CHECK(catalog.size() >= 15);
    for (auto& s : catalog) {
        CHECK(s.size() <= 8);
        CHECK(s.mul(s.one(), s.one()) == s.one());
        for (uint8_t x = 0; x < s.size(); ++x) {
            CHECK(s.add(x, s.zero()) == x);
            CHECK(s.mul(x, s.one()) == x);
            for (uint8_t y = 0; y < s.size(); ++y) {
                CHECK(s.add(x, y) == s.add(y, x));
                CHECK(s.mul(x, y) == s.mul(y, x));
            }
        }
    }
    // GF(4) has no nontrivial idempotents; Z/6 has four.
    for (auto& s : catalog) {
        if (s.name() == "GF(4)") CHECK(s.idempotents().size() == 2);
        if (s.name() == "Z/6") CHECK(s.idempotents().size() == 4);
    }
}
