#pragma once

// The theorem-verification suites: parameterized runners for the nine
// acceptance checks (main theorem, closed-class fixed points, ultrafilter
// calculus, limit primality, regular-hull laws, contraction certificates,
// witness construction, comaximality, epimorphism evidence). Exact arithmetic
// throughout; every comparison is zero-tolerance.

#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spectopo/constructible.hpp"
#include "spectopo/ultrafilter.hpp"
#include "spectopo/vnr.hpp"

namespace spectopo {

struct VerifyConfig {
    uint64_t seed = 0;
    size_t theorem_families = 500;   // criterion 1
    size_t fixed_point_samples = 200; // criterion 2, per ring
    size_t induced_samples = 100;    // criterion 3
    size_t primality_samples = 1000; // criterion 4, per descriptor class
    uint64_t vnr_max_n = 1000;       // criteria 5, 6
    size_t witness_families = 50;    // criterion 7
    size_t witness_rules = 10;       // criterion 7
    uint64_t comaximal_max_n = 200;  // criterion 8
    uint64_t epimorphism_max_n = 10; // criterion 9
    unsigned threads = 0;            // 0: hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;

    json to_json() const {
        json j;
        j["criterion"] = id;
        j["name"] = name;
        j["pass"] = pass;
        j["detail"] = detail;
        j["seconds"] = seconds;
        return j;
    }
};

namespace detail {

inline std::vector<RingSpec> infinite_rings() {
    return {RingSpec::integers(), RingSpec::poly_field(2), RingSpec::poly_field(3)};
}

inline std::vector<PrimeGen> prime_pool(const RingSpec& ring, size_t count) {
    std::vector<PrimeGen> pool;
    ClosedPrimeStream stream(ring);
    for (size_t i = 0; i < count; ++i) {
        auto g = stream.next();
        if (!g) break;
        pool.push_back(*g);
    }
    return pool;
}

inline std::vector<PrimeGen> sample_primes(const std::vector<PrimeGen>& pool, size_t max_count,
                                           std::mt19937_64& rng) {
    std::uniform_int_distribution<size_t> count_dist(0, max_count);
    size_t want = count_dist(rng);
    std::vector<PrimeGen> out;
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (size_t i = 0; i < want; ++i) out.push_back(pool[pick(rng)]);
    return sorted_unique(std::move(out));
}

inline SpectrumSubset random_progression(const RingSpec& ring, std::mt19937_64& rng,
                                         bool allow_generic) {
    std::bernoulli_distribution flag(0.3);
    bool generic = allow_generic && flag(rng);
    if (ring.kind() == RingKind::Integers) {
        std::uniform_int_distribution<uint64_t> mdist(3, 40);
        uint64_t m = mdist(rng);
        std::uniform_int_distribution<uint64_t> adist(1, m - 1);
        uint64_t a = adist(rng);
        while (std::gcd(a, m) != 1) a = adist(rng);
        return SpectrumSubset::progression(ring, a, m, generic);
    }
    std::uniform_int_distribution<uint64_t> mdist(2, 8);
    uint64_t m = mdist(rng);
    std::uniform_int_distribution<uint64_t> adist(0, m - 1);
    return SpectrumSubset::progression(ring, adist(rng), m, generic);
}

template <typename F>
inline CriterionResult timed(int id, std::string name, F&& body) {
    CriterionResult res;
    res.id = id;
    res.name = std::move(name);
    auto t0 = std::chrono::steady_clock::now();
    try {
        res.pass = body(res.detail);
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = std::string("exception: ") + e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

/// Splits [lo, hi] across worker threads; the worker returns an error string
/// or empty. Failures are reported in deterministic (smallest-n) order.
template <typename Worker>
inline std::string parallel_sweep(uint64_t lo, uint64_t hi, unsigned threads, Worker worker) {
    unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::string> failures(static_cast<size_t>(hi - lo + 1));
    std::atomic<uint64_t> next(lo);
    auto run = [&] {
        while (true) {
            uint64_t n = next.fetch_add(1);
            if (n > hi) break;
            failures[static_cast<size_t>(n - lo)] = worker(n);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (!f.empty()) return f;
    return {};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Criterion 1: patch closure equals ultrafilter closure

inline CriterionResult verify_main_theorem(const VerifyConfig& cfg) {
    return detail::timed(1, "patch closure = ultrafilter closure", [&](std::string& detail) {
        std::mt19937_64 rng(cfg.seed * 1000003ULL + 1);
        auto rings = detail::infinite_rings();
        size_t per_ring = (cfg.theorem_families + rings.size() - 1) / rings.size();
        size_t progressions_per_ring =
            std::max<size_t>(7, per_ring / 8); // at least 20 progression families overall
        size_t checked = 0, progressions = 0;
        for (auto& ring : rings) {
            auto pool = detail::prime_pool(ring, 120);
            for (size_t i = 0; i < per_ring; ++i) {
                SpectrumSubset family = SpectrumSubset::empty(ring);
                if (i < progressions_per_ring) {
                    family = detail::random_progression(ring, rng, true);
                    ++progressions;
                } else if (i % 2 == 0) {
                    std::bernoulli_distribution flag(0.2);
                    family = SpectrumSubset::finite(
                        ring, detail::sample_primes(pool, 50, rng), flag(rng));
                } else {
                    std::bernoulli_distribution flag(0.5);
                    family = SpectrumSubset::cofinite(
                        ring, detail::sample_primes(pool, 10, rng), flag(rng));
                }
                SpectrumSubset patch = patch_closure(family);
                SpectrumSubset ultra = ultrafilter_closure(family);
                if (patch != ultra) {
                    detail = "closures differ on " + family.to_string() + ": patch " +
                             patch.to_string() + " vs ultrafilter " + ultra.to_string();
                    return false;
                }
                ++checked;
            }
        }
        std::ostringstream os;
        os << checked << " families (" << progressions << " progression-backed) across 3 rings";
        detail = os.str();
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 2: V(I) and D(a) are ultrafilter-closed

inline CriterionResult verify_closed_classes(const VerifyConfig& cfg) {
    return detail::timed(
        2, "V(I) and D(a) are fixed points of ultrafilter closure", [&](std::string& detail) {
            std::mt19937_64 rng(cfg.seed * 1000003ULL + 2);
            std::vector<RingSpec> rings = detail::infinite_rings();
            rings.push_back(RingSpec::modular(12));
            rings.push_back(RingSpec::modular(360));
            size_t checked = 0;
            for (auto& ring : rings) {
                for (size_t i = 0; i < cfg.fixed_point_samples; ++i) {
                    std::uniform_int_distribution<int> gens(1, 3);
                    std::vector<RingElement> ideal_gens;
                    for (int g = gens(rng); g > 0; --g)
                        ideal_gens.push_back(random_element(ring, rng));
                    Ideal ideal = Ideal::from_generators(ring, ideal_gens);
                    RingElement a = random_element(ring, rng);
                    SpectrumSubset v = v_of(ideal), d = d_of(a);
                    if (ultrafilter_closure(v) != v) {
                        detail = "V" + ideal.to_string() + " is not ultrafilter-closed in " +
                                 ring.to_string();
                        return false;
                    }
                    if (ultrafilter_closure(d) != d) {
                        detail = "D(" + a.to_string() + ") is not ultrafilter-closed in " +
                                 ring.to_string();
                        return false;
                    }
                    if (!is_patch_closed(v) || !is_patch_closed(d)) {
                        detail = "defining class is not patch-closed in " + ring.to_string();
                        return false;
                    }
                    ++checked;
                }
            }
            detail = std::to_string(checked) + " (I, a) samples across " +
                     std::to_string(rings.size()) + " rings";
            return true;
        });
}

// ---------------------------------------------------------------------------
// Criterion 3: ultrafilter calculus on finite carriers + induced limits

inline CriterionResult verify_ultrafilter_calculus(const VerifyConfig& cfg) {
    return detail::timed(
        3, "finite-carrier enumeration + induced-limit preservation",
        [&](std::string& detail) {
            // Brute-force oracle: scan every family of subsets of a carrier of
            // size <= 4 and keep those passing the axiom check.
            for (size_t n = 1; n <= 4; ++n) {
                const uint32_t subsets = 1u << n;
                const uint64_t families = 1ull << subsets;
                std::vector<std::vector<uint32_t>> found;
                for (uint64_t fam = 0; fam < families; ++fam) {
                    std::vector<uint32_t> members;
                    for (uint32_t m = 0; m < subsets; ++m)
                        if ((fam >> m) & 1) members.push_back(m);
                    if (members.empty()) continue;
                    if (check_ultrafilter_axioms(n, members).ok) found.push_back(members);
                }
                if (found.size() != n) {
                    detail = "carrier size " + std::to_string(n) + ": expected " +
                             std::to_string(n) + " ultrafilters, brute force found " +
                             std::to_string(found.size());
                    return false;
                }
                auto enumerated = enumerate_ultrafilters(n);
                for (auto& u : enumerated) {
                    (void)u.principal_point(); // throws if not principal
                    bool matched = false;
                    for (auto& f : found)
                        if (f == u.members()) matched = true;
                    if (!matched) {
                        detail = "enumerated ultrafilter missing from the brute-force list";
                        return false;
                    }
                }
            }
            // Induced ultrafilters preserve the limit.
            std::mt19937_64 rng(cfg.seed * 1000003ULL + 3);
            auto rings = detail::infinite_rings();
            size_t preserved = 0;
            for (size_t i = 0; preserved < cfg.induced_samples && i < 8 * cfg.induced_samples;
                 ++i) {
                const RingSpec& ring = rings[i % rings.size()];
                auto pool = detail::prime_pool(ring, 40);
                std::bernoulli_distribution coin(0.5);
                if (coin(rng)) {
                    // Nonprincipal on all closed primes; restrict to a member,
                    // then extend back to a superset.
                    SpectrumSubset carrier = SpectrumSubset::cofinite(ring, {}, false);
                    auto rules = standard_selection_rules(6);
                    UltrafilterDescriptor u = UltrafilterDescriptor::nonprincipal(
                        carrier, rules[i % rules.size()]);
                    SpectrumSubset c1 = coin(rng)
                                            ? remove_closed_points(
                                                  carrier, detail::sample_primes(pool, 6, rng))
                                            : detail::random_progression(ring, rng, false);
                    if (!u.member(c1)) {
                        // The rule rejected this trace; its complement is
                        // selected instead, and induction must refuse.
                        bool refused = false;
                        try {
                            (void)u.induce_on_member(c1);
                        } catch (const PreconditionError&) {
                            refused = true;
                        }
                        if (!refused) {
                            detail = "induce_on_member accepted a non-selected trace";
                            return false;
                        }
                        continue;
                    }
                    UltrafilterDescriptor u1 = u.induce_on_member(c1);
                    if (u1.limit() != u.limit()) {
                        detail = "member-induced limit changed on " + c1.to_string();
                        return false;
                    }
                    SpectrumSubset cl = SpectrumSubset::all(ring);
                    UltrafilterDescriptor ul = u1.induce_on_superset(cl);
                    if (ul.limit() != u1.limit()) {
                        detail = "superset-induced limit changed on " + cl.to_string();
                        return false;
                    }
                    RingElement zero = RingElement::zero(ring);
                    if (!ul.limit_contains(zero).in_limit) {
                        detail = "0 missing from an induced limit";
                        return false;
                    }
                } else {
                    // Principal descriptors: restriction and extension keep
                    // the principal point.
                    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
                    PrimeIdeal pt = PrimeIdeal::closed(ring, pool[pick(rng)]);
                    SpectrumSubset carrier = SpectrumSubset::all(ring);
                    UltrafilterDescriptor u = UltrafilterDescriptor::principal(carrier, pt);
                    SpectrumSubset c1 = unite(SpectrumSubset::singleton(pt),
                                              SpectrumSubset::finite(
                                                  ring, detail::sample_primes(pool, 5, rng)));
                    UltrafilterDescriptor u1 = u.induce_on_member(c1);
                    UltrafilterDescriptor ul = u1.induce_on_superset(carrier);
                    if (u1.limit() != pt || ul.limit() != pt) {
                        detail = "principal induced limit changed";
                        return false;
                    }
                }
                ++preserved;
            }
            detail = "carriers 1..4 enumerated against brute force; " +
                     std::to_string(preserved) + " induced configurations preserved limits";
            return true;
        });
}

// ---------------------------------------------------------------------------
// Criterion 4: P_U primality

inline CriterionResult verify_limit_primality(const VerifyConfig& cfg) {
    return detail::timed(4, "P_U prime-ideal laws per descriptor class", [&](std::string& detail) {
        auto z = RingSpec::integers();
        auto gf2 = RingSpec::poly_field(2);
        auto gf3 = RingSpec::poly_field(3);
        auto z12 = RingSpec::modular(12);
        std::vector<std::pair<std::string, UltrafilterDescriptor>> classes;
        classes.emplace_back("principal on Spec(Z/12)",
                             UltrafilterDescriptor::principal(
                                 SpectrumSubset::all(z12),
                                 PrimeIdeal::closed(z12, PrimeGen(Int(3)))));
        classes.emplace_back("principal on a cofinite carrier in Spec(Z)",
                             UltrafilterDescriptor::principal(
                                 SpectrumSubset::cofinite(z, {PrimeGen(Int(2))}, false),
                                 PrimeIdeal::closed(z, PrimeGen(Int(5)))));
        classes.emplace_back("nonprincipal on all closed primes of Z",
                             UltrafilterDescriptor::nonprincipal(
                                 SpectrumSubset::cofinite(z, {}, false)));
        classes.emplace_back("nonprincipal on progression(1,4)",
                             UltrafilterDescriptor::nonprincipal(
                                 SpectrumSubset::progression(z, 1, 4)));
        classes.emplace_back("nonprincipal on all closed primes of GF(2)[x]",
                             UltrafilterDescriptor::nonprincipal(
                                 SpectrumSubset::cofinite(gf2, {}, false)));
        classes.emplace_back("nonprincipal on a cofinite carrier in GF(3)[x]",
                             UltrafilterDescriptor::nonprincipal(SpectrumSubset::cofinite(
                                 gf3, {PrimeGen(pf_x(3))}, false)));
        for (size_t i = 0; i < classes.size(); ++i) {
            auto rep = limit_primality_check(classes[i].second, cfg.primality_samples,
                                             cfg.seed + i);
            if (!rep.pass()) {
                detail = classes[i].first + ": " +
                         (rep.details.empty() ? "violation" : rep.details.front());
                return false;
            }
        }
        detail = std::to_string(classes.size()) + " descriptor classes, " +
                 std::to_string(cfg.primality_samples) + " pairs each";
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 5: regular-ring laws, exhaustively

inline CriterionResult verify_vnr_laws(const VerifyConfig& cfg) {
    return detail::timed(5, "punctual-inverse and principal-generation laws", [&](std::string& detail) {
        std::string failure = detail::parallel_sweep(
            2, cfg.vnr_max_n, cfg.threads, [&](uint64_t n) -> std::string {
                VnrRing t = VnrRing::for_modulus(Int(n));
                auto rep = check_vnr_laws(t);
                if (!rep.pass())
                    return "n=" + std::to_string(n) + ": " + rep.first_violation;
                return {};
            });
        if (!failure.empty()) {
            detail = failure;
            return false;
        }
        detail = "all n <= " + std::to_string(cfg.vnr_max_n) +
                 ", every element and pair of T(Z/n)";
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 6: hull and contraction certificates

inline CriterionResult verify_hull_contraction(const VerifyConfig& cfg) {
    return detail::timed(6, "hull certificates and contraction homeomorphism", [&](std::string& detail) {
        std::string failure = detail::parallel_sweep(
            2, cfg.vnr_max_n, cfg.threads, [&](uint64_t n) -> std::string {
                RingSpec ring = RingSpec::modular(Int(n));
                Hull hull = regular_hull(ring, Int(1000000), cfg.vnr_max_n);
                if (!hull.certificate.relations_hold)
                    return "n=" + std::to_string(n) + ": defining relations fail";
                if (!hull.certificate.spectrum_bijection)
                    return "n=" + std::to_string(n) + ": spectrum tables disagree";
                bool squarefree = is_von_neumann_regular(ring);
                if (hull.iota.is_bijective() != squarefree)
                    return "n=" + std::to_string(n) +
                           ": iota bijectivity disagrees with squarefreeness";
                // Regularity via punctual inverses, cross-checked both ways.
                bool all_inverses = true;
                for (uint64_t a = 0; a < n; ++a)
                    if (!try_punctual_inverse(ring, RingElement::from_int(ring, Int(a)))) {
                        all_inverses = false;
                        break;
                    }
                if (all_inverses != squarefree)
                    return "n=" + std::to_string(n) +
                           ": punctual-inverse sweep disagrees with squarefreeness";
                auto cert = contraction_map(hull.iota);
                if (!cert.pass())
                    return "n=" + std::to_string(n) + ": " + cert.first_violation;
                return {};
            });
        if (!failure.empty()) {
            detail = failure;
            return false;
        }
        detail = "all n <= " + std::to_string(cfg.vnr_max_n) +
                 ": bijectivity <=> squarefree, V(iota(a))-continuity, zero dimension";
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 7: witness construction under many selection rules

inline CriterionResult verify_witness_construction(const VerifyConfig& cfg) {
    return detail::timed(7, "witness ultrafilters, selection-independent limits", [&](std::string& detail) {
        std::mt19937_64 rng(cfg.seed * 1000003ULL + 7);
        auto rings = detail::infinite_rings();
        auto rules = standard_selection_rules(cfg.witness_rules);
        size_t families = 0;
        for (size_t i = 0; i < cfg.witness_families; ++i) {
            const RingSpec& ring = rings[i % rings.size()];
            SpectrumSubset family = SpectrumSubset::empty(ring);
            if (i % 2 == 0) {
                family = detail::random_progression(ring, rng, false);
            } else {
                auto pool = detail::prime_pool(ring, 60);
                family = SpectrumSubset::cofinite(ring, detail::sample_primes(pool, 8, rng),
                                                  false);
            }
            for (auto& rule : rules) {
                WitnessResult w = witness_ultrafilter(family, rule);
                if (!w.witness.is_generic()) {
                    detail = "witness is not the generic point on " + family.to_string();
                    return false;
                }
                if (w.ultrafilter.limit() != w.witness) {
                    detail = "limit differs from the witness under rule " + rule.name;
                    return false;
                }
                for (size_t s = 0; s < 50; ++s) {
                    RingElement e = random_element(ring, rng);
                    MembershipVerdict v = w.ultrafilter.limit_contains(e);
                    if (v.in_limit != w.witness.contains(e)) {
                        detail = "membership verdict for " + e.to_string() +
                                 " contradicts the witness under rule " + rule.name;
                        return false;
                    }
                }
            }
            ++families;
        }
        detail = std::to_string(families) + " non-closed families x " +
                 std::to_string(rules.size()) + " selection rules, 50 elements each";
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 8: comaximality lemma, exhaustively for small hulls

inline CriterionResult verify_comaximality(const VerifyConfig& cfg) {
    return detail::timed(8, "a(ax-1) = 0 with exclusive prime coverage", [&](std::string& detail) {
        for (uint64_t n = 2; n <= cfg.comaximal_max_n; ++n) {
            VnrRing t = VnrRing::for_modulus(Int(n));
            auto rep = comaximal_cover_check(t);
            if (!rep.pass()) {
                detail = "n=" + std::to_string(n) + ": " +
                         (rep.details.empty() ? "violation" : rep.details.front());
                return false;
            }
        }
        detail = "exhaustive over T(Z/n) for all n <= " +
                 std::to_string(cfg.comaximal_max_n);
        return true;
    });
}

// ---------------------------------------------------------------------------
// Criterion 9: epimorphism evidence

inline CriterionResult verify_epimorphism_evidence(const VerifyConfig& cfg) {
    return detail::timed(9, "at most one hom out of T(Z/n) per small target", [&](std::string& detail) {
        auto catalog = small_ring_catalog();
        for (uint64_t n = 2; n <= cfg.epimorphism_max_n; ++n) {
            auto rep = epimorphism_evidence(RingSpec::modular(Int(n)), catalog);
            if (!rep.at_most_one_everywhere) {
                for (auto& t : rep.targets)
                    if (t.hom_count > 1)
                        detail = "n=" + std::to_string(n) + ": " +
                                 std::to_string(t.hom_count) + " homs into " + t.name;
                return false;
            }
        }
        detail = "n <= " + std::to_string(cfg.epimorphism_max_n) + " against " +
                 std::to_string(catalog.size()) + " catalog rings (evidence only)";
        return true;
    });
}

inline std::vector<CriterionResult> run_all_criteria(const VerifyConfig& cfg) {
    return {verify_main_theorem(cfg),      verify_closed_classes(cfg),
            verify_ultrafilter_calculus(cfg), verify_limit_primality(cfg),
            verify_vnr_laws(cfg),          verify_hull_contraction(cfg),
            verify_witness_construction(cfg), verify_comaximality(cfg),
            verify_epimorphism_evidence(cfg)};
}

} // namespace spectopo
