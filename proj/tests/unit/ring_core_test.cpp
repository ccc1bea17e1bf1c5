#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spectopo/ring.hpp"
#include "test_oracles.hpp"

using namespace spectopo;

namespace {

RingElement elt(const RingSpec& ring, long v) { return RingElement::from_int(ring, Int(v)); }

RingElement pelt(const RingSpec& ring, const std::string& s) {
    return parse_element(ring, s);
}

} // namespace

TEST_CASE("arithmetic in canonical form") {
    auto z = RingSpec::integers();
    auto z6 = RingSpec::modular(6);
    auto gf2 = RingSpec::poly_field(2);

    CHECK(elt(z6, 4) * elt(z6, 4) == elt(z6, 4)); // 16 mod 6
    CHECK(elt(z, 123456789) + elt(z, 0) == elt(z, 123456789));
    CHECK(pelt(gf2, "x+1") + pelt(gf2, "x+1") == RingElement::zero(gf2));

    CHECK(elt(z6, -1) == elt(z6, 5));
    CHECK((-elt(z, 7)) == elt(z, -7));
    CHECK(elt(z6, 4) - elt(z6, 5) == elt(z6, 5));

    CHECK_THROWS_AS(elt(z, 1) + elt(z6, 1), RingMismatchError);
    CHECK_THROWS_AS(elt(z, 1) == elt(z6, 1), RingMismatchError);
}

TEST_CASE("units") {
    auto z = RingSpec::integers();
    auto z6 = RingSpec::modular(6);
    auto gf3 = RingSpec::poly_field(3);

    CHECK(is_unit(elt(z, 1)));
    CHECK(is_unit(elt(z, -1)));
    CHECK_FALSE(is_unit(elt(z, 2)));
    CHECK(is_unit(elt(z6, 5))); // 5*5 = 25 = 1 mod 6
    CHECK_FALSE(is_unit(elt(z6, 4)));
    CHECK_FALSE(is_unit(pelt(gf3, "x")));
    CHECK(is_unit(pelt(gf3, "2")));
}

TEST_CASE("integer factorization against the trial-division oracle") {
    auto z = RingSpec::integers();
    auto f12 = factor(elt(z, 12));
    REQUIRE(f12.factors.size() == 2);
    CHECK(f12.unit == elt(z, 1));
    CHECK(f12.factors[0].first == elt(z, 2));
    CHECK(f12.factors[0].second == 2);
    CHECK(f12.factors[1].first == elt(z, 3));
    CHECK(f12.factors[1].second == 1);

    auto fm1 = factor(elt(z, -1));
    CHECK(fm1.unit == elt(z, -1));
    CHECK(fm1.factors.empty());

    CHECK_THROWS_AS(factor(RingElement::zero(z)), ZeroElementError);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> dist(-100000, 100000);
    for (int i = 0; i < 300; ++i) {
        long v = dist(rng);
        if (v == 0) continue;
        auto f = factor(elt(z, v));
        CHECK(f.reconstruct() == elt(z, v));
        auto expected = oracles::naive_factor(Int(v < 0 ? -v : v));
        REQUIRE(f.factors.size() == expected.size());
        for (size_t k = 0; k < expected.size(); ++k) {
            CHECK(f.factors[k].first.as_int() == expected[k].first);
            CHECK(f.factors[k].second == expected[k].second);
        }
    }
}

TEST_CASE("factorization in Z/n resolves the n-adic roles") {
    auto z12 = RingSpec::modular(12);
    auto f8 = factor(elt(z12, 8)); // gcd(8,12) = 4
    REQUIRE(f8.factors.size() == 1);
    CHECK(f8.factors[0].first == elt(z12, 2));
    CHECK(f8.factors[0].second == 2);
    CHECK(is_unit(f8.unit));
    CHECK(f8.reconstruct() == elt(z12, 8));

    auto f5 = factor(elt(z12, 5)); // unit
    CHECK(f5.factors.empty());
    CHECK(f5.unit == elt(z12, 5));

    std::mt19937_64 rng(11);
    for (Int n : {Int(6), Int(12), Int(360), Int(1024), Int(97)}) {
        auto ring = RingSpec::modular(n);
        std::uniform_int_distribution<uint64_t> dist(1, static_cast<uint64_t>(n) - 1);
        for (int i = 0; i < 200; ++i) {
            auto a = RingElement::from_int(ring, Int(dist(rng)));
            auto f = factor(a);
            CHECK(f.reconstruct() == a);
            CHECK(is_unit(f.unit));
            for (auto& [p, e] : f.factors) {
                (void)e;
                CHECK(n % p.as_int() == 0);
                CHECK(oracles::naive_is_prime(p.as_int()));
            }
        }
    }
}

TEST_CASE("polynomial factorization against the exhaustive oracle") {
    auto gf2 = RingSpec::poly_field(2);
    auto fx = factor(pelt(gf2, "x^2+x"));
    REQUIRE(fx.factors.size() == 2);
    CHECK(fx.factors[0].first == pelt(gf2, "x"));
    CHECK(fx.factors[1].first == pelt(gf2, "x+1"));
    CHECK(fx.factors[0].second == 1);
    CHECK(fx.factors[1].second == 1);

    // p-th power multiplicities: x^4 + x^2 = (x(x+1))^2 over F_2.
    auto fsq = factor(pelt(gf2, "x^4+x^2"));
    REQUIRE(fsq.factors.size() == 2);
    CHECK(fsq.factors[0].second == 2);
    CHECK(fsq.factors[1].second == 2);

    std::mt19937_64 rng(23);
    for (uint64_t p : {2ull, 3ull, 5ull}) {
        auto ring = RingSpec::poly_field(p);
        std::uniform_int_distribution<uint64_t> coef(0, p - 1);
        std::uniform_int_distribution<int> deg(1, 6);
        for (int i = 0; i < 60; ++i) {
            std::vector<uint64_t> c(static_cast<size_t>(deg(rng)) + 1);
            for (auto& v : c) v = coef(rng);
            PolyFp f = pf_make(p, std::move(c));
            if (f.is_zero()) continue;
            auto a = RingElement::from_poly(ring, f);
            auto fact = factor(a);
            CHECK(fact.reconstruct() == a);
            if (f.degree() >= 1) {
                auto expected = oracles::naive_poly_factor(f);
                REQUIRE(fact.factors.size() == expected.size());
                for (size_t k = 0; k < expected.size(); ++k) {
                    CHECK(fact.factors[k].first.as_poly() == expected[k].first);
                    CHECK(fact.factors[k].second == expected[k].second);
                }
            }
        }
    }
}

TEST_CASE("factorization determinism and certified primes") {
    std::mt19937_64 rng(5);
    std::vector<RingSpec> rings{RingSpec::integers(), RingSpec::modular(360),
                                RingSpec::poly_field(3)};
    for (auto& ring : rings) {
        for (int i = 0; i < 1000; ++i) {
            RingElement a = random_element(ring, rng);
            if (a.is_zero()) continue;
            auto f1 = factor(a);
            auto f2 = factor(a);
            CHECK(f1.reconstruct() == a);
            REQUIRE(f1.factors.size() == f2.factors.size());
            for (size_t k = 0; k < f1.factors.size(); ++k) {
                CHECK(f1.factors[k].first == f2.factors[k].first);
                CHECK(f1.factors[k].second == f2.factors[k].second);
                if (ring.kind() == RingKind::PolyOverPrimeField)
                    CHECK(pf_is_irreducible(f1.factors[k].first.as_poly()));
                else
                    CHECK(is_prime(f1.factors[k].first.as_int()));
            }
            for (size_t k = 1; k < f1.factors.size(); ++k) {
                if (ring.kind() == RingKind::PolyOverPrimeField)
                    CHECK(pf_less(f1.factors[k - 1].first.as_poly(),
                                  f1.factors[k].first.as_poly()));
                else
                    CHECK(f1.factors[k - 1].first.as_int() < f1.factors[k].first.as_int());
            }
        }
    }
}

TEST_CASE("primality: deterministic below 2^64, BPSW beyond") {
    for (Int n = 0; n < 2000; ++n) CHECK(is_prime(n) == oracles::naive_is_prime(n));

    Int m61 = (Int(1) << 61) - 1;
    CHECK(is_prime(m61));
    Int m67 = (Int(1) << 67) - 1; // 193707721 * 761838257287
    CHECK_FALSE(is_prime(m67));
    CHECK(is_prime((Int(1) << 89) - 1));
    CHECK_FALSE(is_prime(m61 * m61)); // perfect square beyond 64 bits
    CHECK_FALSE(is_prime(((Int(1) << 89) - 1) * ((Int(1) << 61) - 1)));
}

TEST_CASE("pollard rho splits desk-scale semiprimes") {
    Int a("1000003"), b("1000033");
    auto f = factor_integer(a * b);
    REQUIRE(f.size() == 2);
    CHECK(f[0].first == a);
    CHECK(f[1].first == b);

    auto g = factor_integer(boost::multiprecision::pow(Int(104729), 3));
    REQUIRE(g.size() == 1);
    CHECK(g[0].first == 104729);
    CHECK(g[0].second == 3);
}

TEST_CASE("ring and element grammars") {
    CHECK(parse_ring("Z") == RingSpec::integers());
    CHECK(parse_ring("Z/12") == RingSpec::modular(12));
    CHECK(parse_ring("GF(7)[x]") == RingSpec::poly_field(7));
    CHECK_THROWS_AS(parse_ring("Q"), Error);
    CHECK_THROWS_AS(parse_ring("Z/1"), Error);
    CHECK_THROWS_AS(parse_ring("GF(6)[x]"), Error);

    auto gf5 = RingSpec::poly_field(5);
    auto f = pelt(gf5, "x^3+2x+1");
    CHECK(f.to_string() == "x^3+2x+1");
    CHECK(pelt(gf5, "4x^2+x") .to_string() == "4x^2+x");
    CHECK(pelt(gf5, "x-1") == pelt(gf5, "x+4"));
    CHECK(parse_element(RingSpec::integers(), "-42").as_int() == -42);
    CHECK_THROWS_AS(parse_element(RingSpec::integers(), "x"), Error);
}

TEST_CASE("monic irreducible enumeration is canonical") {
    IrreduciblePolyStream stream(2);
    CHECK(pf_to_string(stream.next()) == "x");
    CHECK(pf_to_string(stream.next()) == "x+1");
    CHECK(pf_to_string(stream.next()) == "x^2+x+1");
    CHECK(pf_to_string(stream.next()) == "x^3+x+1");
    CHECK(pf_to_string(stream.next()) == "x^3+x^2+1");

    // Degree <= 4 irreducibility agrees with the divisor-search oracle.
    for (uint64_t p : {2ull, 3ull}) {
        for (int d = 1; d <= 4; ++d) {
            for (auto& f : oracles::all_monic(p, d)) {
                CHECK(pf_is_irreducible(f) == oracles::naive_poly_irreducible(f));
            }
        }
    }
}
