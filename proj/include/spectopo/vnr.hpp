#pragma once

// Von Neumann regular calculus: punctual inverses, idempotents, principal
// generation, the regular hull of Z/n as a product of prime fields with
// construction certificates, contraction-map certificates, and epimorphism
// evidence against a catalog of small finite rings.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectopo/ring.hpp"
#include "spectopo/spectrum.hpp"

namespace spectopo {

/// Element of a product of prime fields: one residue per component.
struct VnrElem {
    static constexpr size_t kMaxComponents = 16;
    std::array<uint32_t, kMaxComponents> r{};
    uint8_t k = 0;

    friend bool operator==(const VnrElem& a, const VnrElem& b) {
        if (a.k != b.k) return false;
        for (size_t i = 0; i < a.k; ++i)
            if (a.r[i] != b.r[i]) return false;
        return true;
    }
    friend bool operator!=(const VnrElem& a, const VnrElem& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = "(";
        for (size_t i = 0; i < k; ++i) s += (i ? "," : "") + std::to_string(r[i]);
        return s + ")";
    }
};

/// The von Neumann regular hull of Z/n: the product of the prime fields F_p
/// over the distinct primes p | n. Every element satisfies a^2 * pinv(a) = a.
class VnrRing {
public:
    static VnrRing for_modulus(const Int& n, const Int& construction_bound = Int(1000000)) {
        if (n < 2) throw Error("regular hull needs a modulus n >= 2");
        if (n > construction_bound)
            throw BoundError("modulus " + n.str() + " exceeds the construction bound " +
                             construction_bound.str());
        VnrRing out;
        out.modulus_ = n;
        for (auto& [p, e] : factor_integer(n)) {
            (void)e;
            if (p >= (Int(1) << 31)) throw BoundError("component prime too large: " + p.str());
            out.primes_.push_back(static_cast<uint32_t>(p));
        }
        if (out.primes_.size() > VnrElem::kMaxComponents)
            throw BoundError("too many distinct prime factors");
        for (uint32_t p : out.primes_) {
            std::vector<uint32_t> inv;
            if (p <= (1u << 21)) {
                inv.assign(p, 0);
                if (p > 1) inv[1 % p] = 1 % p;
                for (uint32_t i = 2; i < p; ++i)
                    inv[i] = static_cast<uint32_t>(
                        static_cast<uint64_t>(p - p / i) * inv[p % i] % p);
            }
            out.inverse_tables_.push_back(std::move(inv));
        }
        return out;
    }

    const Int& modulus() const { return modulus_; }
    const std::vector<uint32_t>& component_primes() const { return primes_; }
    size_t component_count() const { return primes_.size(); }

    /// Number of elements, when it fits a 64-bit counter.
    std::optional<uint64_t> element_count() const {
        uint64_t n = 1;
        for (uint32_t p : primes_) {
            if (n > UINT64_MAX / p) return std::nullopt;
            n *= p;
        }
        return n;
    }

    VnrElem zero() const {
        VnrElem e;
        e.k = static_cast<uint8_t>(primes_.size());
        return e;
    }

    VnrElem one() const {
        VnrElem e = zero();
        for (size_t i = 0; i < primes_.size(); ++i) e.r[i] = 1 % primes_[i];
        return e;
    }

    VnrElem embed(const Int& x) const {
        VnrElem e = zero();
        for (size_t i = 0; i < primes_.size(); ++i)
            e.r[i] = static_cast<uint32_t>(mod_nonneg(x, Int(primes_[i])));
        return e;
    }

    VnrElem add(const VnrElem& a, const VnrElem& b) const {
        VnrElem e = a;
        for (size_t i = 0; i < primes_.size(); ++i) {
            uint64_t s = static_cast<uint64_t>(a.r[i]) + b.r[i];
            e.r[i] = static_cast<uint32_t>(s >= primes_[i] ? s - primes_[i] : s);
        }
        return e;
    }

    VnrElem neg(const VnrElem& a) const {
        VnrElem e = a;
        for (size_t i = 0; i < primes_.size(); ++i)
            e.r[i] = a.r[i] ? primes_[i] - a.r[i] : 0;
        return e;
    }

    VnrElem sub(const VnrElem& a, const VnrElem& b) const { return add(a, neg(b)); }

    VnrElem mul(const VnrElem& a, const VnrElem& b) const {
        VnrElem e = a;
        for (size_t i = 0; i < primes_.size(); ++i)
            e.r[i] = static_cast<uint32_t>(static_cast<uint64_t>(a.r[i]) * b.r[i] %
                                           primes_[i]);
        return e;
    }

    uint32_t component_inverse(size_t i, uint32_t v) const {
        if (v == 0) return 0;
        if (!inverse_tables_[i].empty()) return inverse_tables_[i][v];
        return static_cast<uint32_t>(detail::powmod_u64(v, primes_[i] - 2, primes_[i]));
    }

    /// The unique x with a^2 x = a and x^2 a = x: componentwise field inverse
    /// where nonzero, zero where zero.
    VnrElem punctual_inverse(const VnrElem& a) const {
        VnrElem e = a;
        for (size_t i = 0; i < primes_.size(); ++i) e.r[i] = component_inverse(i, a.r[i]);
        return e;
    }

    /// e(a) = a * pinv(a): the idempotent generating aT.
    VnrElem idempotent_of(const VnrElem& a) const { return mul(a, punctual_inverse(a)); }

    /// e(a) + e(b)(1 - e(a)): a single generator of aT + bT.
    VnrElem principal_generator(const VnrElem& a, const VnrElem& b) const {
        VnrElem ea = idempotent_of(a), eb = idempotent_of(b);
        return add(ea, mul(eb, sub(one(), ea)));
    }

    /// Membership in the i-th prime Q_i = ker(projection i).
    bool in_prime(const VnrElem& a, size_t i) const { return a.r[i] == 0; }

    /// Membership x in aT, with the witness verified.
    bool in_principal_ideal(const VnrElem& x, const VnrElem& a) const {
        VnrElem t = zero();
        for (size_t i = 0; i < primes_.size(); ++i) {
            if (a.r[i] == 0) {
                if (x.r[i] != 0) return false;
            } else {
                t.r[i] = static_cast<uint32_t>(static_cast<uint64_t>(x.r[i]) *
                                               component_inverse(i, a.r[i]) % primes_[i]);
            }
        }
        return mul(a, t) == x;
    }

    /// Membership x in aT + bT, with the witnesses verified.
    bool in_ideal_sum(const VnrElem& x, const VnrElem& a, const VnrElem& b) const {
        VnrElem u = zero(), v = zero();
        for (size_t i = 0; i < primes_.size(); ++i) {
            if (a.r[i] != 0) {
                u.r[i] = static_cast<uint32_t>(static_cast<uint64_t>(x.r[i]) *
                                               component_inverse(i, a.r[i]) % primes_[i]);
            } else if (b.r[i] != 0) {
                v.r[i] = static_cast<uint32_t>(static_cast<uint64_t>(x.r[i]) *
                                               component_inverse(i, b.r[i]) % primes_[i]);
            } else if (x.r[i] != 0) {
                return false;
            }
        }
        return add(mul(a, u), mul(b, v)) == x;
    }

    /// Odometer step through all elements; returns false after the last one.
    bool next_element(VnrElem& e) const {
        for (size_t i = 0; i < primes_.size(); ++i) {
            if (++e.r[i] < primes_[i]) return true;
            e.r[i] = 0;
        }
        return false;
    }

    json to_json() const {
        json j;
        j["modulus"] = modulus_.str();
        json comps = json::array();
        for (uint32_t p : primes_) comps.push_back(p);
        j["components"] = comps;
        return j;
    }

private:
    Int modulus_;
    std::vector<uint32_t> primes_;
    std::vector<std::vector<uint32_t>> inverse_tables_;
};

/// True iff every element of Z/n has a punctual inverse; equivalent to n
/// being squarefree.
inline bool is_von_neumann_regular(const RingSpec& ring) {
    if (ring.kind() != RingKind::Modular)
        throw Error("is_von_neumann_regular expects Z/n");
    return is_squarefree(ring.modulus());
}

/// The punctual inverse in Z/n when it exists (absent exactly at elements
/// whose valuation at some prime power p^e || n lies strictly between 0 and e).
inline std::optional<RingElement> try_punctual_inverse(const RingSpec& ring,
                                                       const RingElement& a) {
    if (ring.kind() != RingKind::Modular) throw Error("try_punctual_inverse expects Z/n");
    require_same_ring(ring, a.ring());
    const Int& n = ring.modulus();
    Int x = 0, m = 1;
    for (auto& [p, e] : factor_integer(n)) {
        Int pe = boost::multiprecision::pow(p, e);
        Int ape = a.as_int() % pe;
        Int xpe;
        if (ape == 0) {
            xpe = 0;
        } else if (ape % p != 0) {
            xpe = invmod(ape, pe);
        } else {
            return std::nullopt;
        }
        // CRT combine x = xpe (mod pe) into x (mod m * pe).
        Int t = mod_nonneg((xpe - x) * invmod(m % pe, pe), pe);
        x += m * t;
        m *= pe;
    }
    RingElement result = RingElement::from_int(ring, x);
    RingElement lhs = a * a * result;
    RingElement rhs = result * result * a;
    if (lhs != a || rhs != result)
        throw Error("internal: punctual inverse candidate failed verification");
    return result;
}

// ---------------------------------------------------------------------------
// The canonical map iota : Z/n -> T(Z/n)

/// Componentwise-reduction homomorphism with its contraction on spectra.
class RingHom {
public:
    RingHom(RingSpec source, VnrRing target)
        : source_(std::move(source)), target_(std::move(target)) {
        if (source_.kind() != RingKind::Modular)
            throw Error("RingHom source must be Z/n");
    }

    const RingSpec& source() const { return source_; }
    const VnrRing& target() const { return target_; }

    VnrElem apply(const Int& lift) const { return target_.embed(lift); }
    VnrElem apply(const RingElement& a) const {
        require_same_ring(source_, a.ring());
        return target_.embed(a.as_int());
    }

    bool is_injective() const {
        Int rad = 1;
        for (uint32_t p : target_.component_primes()) rad *= p;
        return rad == source_.modulus();
    }

    /// iota is onto the product of prime fields iff it is injective here
    /// (both sides have the same cardinality exactly when n is squarefree).
    bool is_bijective() const { return is_injective(); }

    /// Exhaustive check of the homomorphism laws for all pairs of residues,
    /// up to the given bound on n.
    bool verify_hom_laws(uint64_t bound, std::string* violation = nullptr) const {
        const Int& n = source_.modulus();
        if (n > bound) return true; // out of exhaustive range; nothing claimed
        uint64_t nn = static_cast<uint64_t>(n);
        if (!(apply(Int(1)) == target_.one())) {
            if (violation) *violation = "iota(1) != 1";
            return false;
        }
        for (uint64_t x = 0; x < nn; ++x) {
            for (uint64_t y = 0; y < nn; ++y) {
                VnrElem sum = target_.add(apply(Int(x)), apply(Int(y)));
                VnrElem prod = target_.mul(apply(Int(x)), apply(Int(y)));
                if (!(apply(Int((x + y) % nn)) == sum)) {
                    if (violation)
                        *violation = "additivity fails at (" + std::to_string(x) + "," +
                                     std::to_string(y) + ")";
                    return false;
                }
                if (!(apply(Int(x * y % nn)) == prod)) {
                    if (violation)
                        *violation = "multiplicativity fails at (" + std::to_string(x) +
                                     "," + std::to_string(y) + ")";
                    return false;
                }
            }
        }
        return true;
    }

    /// The contraction of the i-th prime of T: iota^{-1}(Q_i) = (p_i) in Z/n.
    PrimeIdeal contract(size_t i) const {
        return PrimeIdeal::closed(source_, PrimeGen(Int(target_.component_primes()[i])));
    }

private:
    RingSpec source_;
    VnrRing target_;
};

// ---------------------------------------------------------------------------
// Hull construction with a certificate

struct HullCertificate {
    bool relations_hold = false;
    uint64_t relations_checked = 0;
    bool spectrum_bijection = false;
    bool iota_injective = false;
    std::vector<std::pair<std::string, std::string>> spectrum_table;

    json to_json() const {
        json j;
        j["relations_hold"] = relations_hold;
        j["relations_checked"] = relations_checked;
        j["spectrum_bijection"] = spectrum_bijection;
        j["iota_injective"] = iota_injective;
        json table = json::array();
        for (auto& [q, p] : spectrum_table) table.push_back(json{{"prime_of_T", q}, {"contracts_to", p}});
        j["spectrum_table"] = table;
        return j;
    }
};

struct Hull {
    VnrRing t;
    RingHom iota;
    HullCertificate certificate;
};

/// Builds T(Z/n) as the product of prime fields and certifies the defining
/// relations a^2 * pinv(a) = a and a * pinv(a)^2 = pinv(a) on the image of
/// Z/n (exhaustively up to law_check_bound), together with the explicit
/// spectrum bijection.
inline Hull regular_hull(const RingSpec& ring, const Int& construction_bound = Int(1000000),
                         uint64_t law_check_bound = 1000) {
    if (ring.kind() != RingKind::Modular) throw Error("regular_hull expects Z/n");
    VnrRing t = VnrRing::for_modulus(ring.modulus(), construction_bound);
    RingHom iota(ring, t);
    HullCertificate cert;
    cert.iota_injective = iota.is_injective();
    const Int& n = ring.modulus();
    uint64_t limit = n <= law_check_bound ? static_cast<uint64_t>(n) : law_check_bound;
    cert.relations_hold = true;
    for (uint64_t a = 0; a < limit; ++a) {
        VnrElem ia = iota.apply(Int(a));
        VnrElem x = t.punctual_inverse(ia);
        if (!(t.mul(t.mul(ia, ia), x) == ia) || !(t.mul(t.mul(x, x), ia) == x)) {
            cert.relations_hold = false;
            break;
        }
        ++cert.relations_checked;
    }
    // Spectrum bijection: Q_i <-> (p_i), checked to be injective and complete.
    cert.spectrum_bijection = true;
    std::vector<PrimeGen> seen;
    for (size_t i = 0; i < t.component_count(); ++i) {
        PrimeIdeal contracted = iota.contract(i);
        cert.spectrum_table.emplace_back("ker(proj_" + std::to_string(t.component_primes()[i]) + ")",
                                         contracted.to_string());
        seen.push_back(contracted.generator());
    }
    if (sorted_unique(seen).size() != t.component_count()) cert.spectrum_bijection = false;
    if (seen.size() != modular_spectrum_points(ring).size()) cert.spectrum_bijection = false;
    return Hull{std::move(t), std::move(iota), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Contraction-map certificates

struct ContractionCertificate {
    bool bijective = false;
    bool continuous = false;
    bool zero_dimensional = false;
    bool homeomorphism = false;
    std::vector<std::pair<std::string, std::string>> table;
    std::string first_violation;

    bool pass() const { return bijective && continuous && zero_dimensional && homeomorphism; }

    json to_json() const {
        json j;
        j["bijective"] = bijective;
        j["continuous"] = continuous;
        j["zero_dimensional"] = zero_dimensional;
        j["homeomorphism"] = homeomorphism;
        if (!first_violation.empty()) j["first_violation"] = first_violation;
        json tb = json::array();
        for (auto& [q, p] : table) tb.push_back(json{{"from", q}, {"to", p}});
        j["table"] = tb;
        return j;
    }
};

/// Certifies the contraction Spec(T) -> Spec(Z/n): bijectivity via the
/// explicit table, Zariski continuity via preimage(V(a)) = V(iota(a)) for all
/// a, and zero-dimensionality of T via explicit separators. With both finite
/// spectra discrete, bijectivity upgrades to a homeomorphism between the
/// Zariski topology upstairs and the patch topology downstairs.
inline ContractionCertificate contraction_map(const RingHom& iota) {
    ContractionCertificate cert;
    const VnrRing& t = iota.target();
    const RingSpec& src = iota.source();
    const size_t k = t.component_count();

    std::vector<PrimeGen> contracted;
    for (size_t i = 0; i < k; ++i) {
        PrimeIdeal p = iota.contract(i);
        cert.table.emplace_back("ker(proj_" + std::to_string(t.component_primes()[i]) + ")",
                                p.to_string());
        contracted.push_back(p.generator());
    }
    cert.bijective = sorted_unique(contracted).size() == k &&
                     modular_spectrum_points(src).size() == k;
    if (!cert.bijective) cert.first_violation = "contraction table is not a bijection";

    cert.continuous = true;
    const Int& n = src.modulus();
    for (Int a = 0; a < n && cert.continuous; ++a) {
        VnrElem ia = iota.apply(a);
        for (size_t i = 0; i < k; ++i) {
            bool upstairs = t.in_prime(ia, i); // Q_i in V(iota(a))
            bool downstairs = a % t.component_primes()[i] == 0; // contract(Q_i) in V(a)
            if (upstairs != downstairs) {
                cert.continuous = false;
                cert.first_violation =
                    "continuity fails at a=" + a.str() + ", component " + std::to_string(i);
                break;
            }
        }
    }

    cert.zero_dimensional = true;
    for (size_t i = 0; i < k && cert.zero_dimensional; ++i) {
        for (size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            // An element in Q_i but not Q_j separates the two primes.
            VnrElem sep = t.zero();
            sep.r[j] = 1 % t.component_primes()[j];
            bool separates = t.in_prime(sep, i) && !t.in_prime(sep, j);
            if (!separates) {
                cert.zero_dimensional = false;
                cert.first_violation = "no separator for primes " + std::to_string(i) +
                                       " and " + std::to_string(j);
                break;
            }
        }
    }
    cert.homeomorphism = cert.bijective;
    return cert;
}

// ---------------------------------------------------------------------------
// The comaximality lemma in a regular ring

struct ComaximalReport {
    uint64_t elements_checked = 0;
    uint64_t violations = 0;
    std::vector<std::string> details;

    bool pass() const { return violations == 0; }

    json to_json() const {
        json j;
        j["elements_checked"] = elements_checked;
        j["violations"] = violations;
        j["details"] = details;
        j["pass"] = pass();
        return j;
    }
};

/// For every a (exhaustively when the ring is small enough): with
/// x = pinv(a), a*(a*x - 1) = 0, and each prime of T contains exactly one of
/// a and a*x - 1.
inline ComaximalReport comaximal_cover_check(const VnrRing& t,
                                             std::optional<uint64_t> element_limit = {}) {
    ComaximalReport rep;
    auto count = t.element_count();
    if (!count || (element_limit && *count > *element_limit)) {
        throw BoundError("comaximal_cover_check: ring too large for exhaustive sweep");
    }
    VnrElem a = t.zero();
    do {
        VnrElem x = t.punctual_inverse(a);
        VnrElem axm1 = t.sub(t.mul(a, x), t.one());
        if (!(t.mul(a, axm1) == t.zero())) {
            ++rep.violations;
            rep.details.push_back("a(ax-1) != 0 at a=" + a.to_string());
        }
        for (size_t i = 0; i < t.component_count(); ++i) {
            bool in_a = t.in_prime(a, i), in_b = t.in_prime(axm1, i);
            if (in_a == in_b) {
                ++rep.violations;
                rep.details.push_back("prime " + std::to_string(i) +
                                      " fails exclusive coverage at a=" + a.to_string());
            }
        }
        ++rep.elements_checked;
        if (rep.violations > 8) break;
    } while (t.next_element(a));
    return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive law checks (Lemma 1, Lemma 2, principal generation)

struct VnrLawReport {
    uint64_t inverse_searches = 0;
    uint64_t pairs_checked = 0;
    uint64_t violations = 0;
    std::string first_violation;

    bool pass() const { return violations == 0; }
};

/// Exhaustive over all elements and pairs of T: the punctual inverse is the
/// unique solution of both defining equations; e(a) is idempotent and
/// generates aT; principal_generator(a, b) generates aT + bT.
inline VnrLawReport check_vnr_laws(const VnrRing& t) {
    VnrLawReport rep;
    auto fail = [&](const std::string& msg) {
        ++rep.violations;
        if (rep.first_violation.empty()) rep.first_violation = msg;
    };
    VnrElem a = t.zero();
    do {
        VnrElem pinv = t.punctual_inverse(a);
        // Uniqueness by exhaustive search over candidate solutions.
        uint64_t solutions = 0;
        VnrElem x = t.zero();
        do {
            if (t.mul(t.mul(a, a), x) == a && t.mul(t.mul(x, x), a) == x) {
                ++solutions;
                if (!(x == pinv)) fail("foreign inverse solution at a=" + a.to_string());
            }
        } while (t.next_element(x));
        ++rep.inverse_searches;
        if (solutions != 1)
            fail("expected exactly one punctual inverse at a=" + a.to_string() + ", found " +
                 std::to_string(solutions));
        VnrElem ea = t.idempotent_of(a);
        if (!(t.mul(ea, ea) == ea)) fail("e(a) not idempotent at a=" + a.to_string());
        if (!t.in_principal_ideal(ea, a) || !t.in_principal_ideal(a, ea))
            fail("aT != e(a)T at a=" + a.to_string());
        VnrElem b = t.zero();
        do {
            VnrElem g = t.principal_generator(a, b);
            bool ok = t.in_principal_ideal(a, g) && t.in_principal_ideal(b, g) &&
                      t.in_ideal_sum(g, a, b);
            if (!ok)
                fail("principal generator fails at a=" + a.to_string() +
                     ", b=" + b.to_string());
            ++rep.pairs_checked;
        } while (t.next_element(b));
    } while (t.next_element(a));
    return rep;
}

// ---------------------------------------------------------------------------
// Small finite rings (tables) and epimorphism evidence

/// A finite commutative unital ring with explicit operation tables.
class FiniteRing {
public:
    static FiniteRing zero_ring() {
        FiniteRing r;
        r.name_ = "0";
        r.size_ = 1;
        r.add_ = {0};
        r.mul_ = {0};
        r.one_ = 0;
        return r;
    }

    static FiniteRing cyclic(unsigned m) {
        FiniteRing r;
        r.name_ = "Z/" + std::to_string(m);
        r.size_ = m;
        r.add_.resize(m * m);
        r.mul_.resize(m * m);
        for (unsigned x = 0; x < m; ++x)
            for (unsigned y = 0; y < m; ++y) {
                r.add_[x * m + y] = static_cast<uint8_t>((x + y) % m);
                r.mul_[x * m + y] = static_cast<uint8_t>((x * y) % m);
            }
        r.one_ = m == 1 ? 0 : 1;
        return r;
    }

    /// F_p[t]/(modulus): elements are polynomials of degree < deg(modulus),
    /// indexed by their base-p coefficient digits.
    static FiniteRing poly_quotient(uint64_t p, const PolyFp& modulus, std::string name) {
        int d = modulus.degree();
        size_t size = 1;
        for (int i = 0; i < d; ++i) size *= p;
        if (size > 64) throw BoundError("finite ring too large for tables");
        auto decode = [&](size_t idx) {
            std::vector<uint64_t> c(static_cast<size_t>(d), 0);
            for (int i = 0; i < d; ++i) {
                c[static_cast<size_t>(i)] = idx % p;
                idx /= p;
            }
            return pf_make(p, std::move(c));
        };
        auto encode = [&](const PolyFp& f) {
            size_t idx = 0;
            for (size_t i = f.c.size(); i-- > 0;) idx = idx * p + f.c[i];
            return idx;
        };
        FiniteRing r;
        r.name_ = std::move(name);
        r.size_ = size;
        r.add_.resize(size * size);
        r.mul_.resize(size * size);
        for (size_t x = 0; x < size; ++x) {
            for (size_t y = 0; y < size; ++y) {
                PolyFp fx = decode(x), fy = decode(y);
                r.add_[x * size + y] = static_cast<uint8_t>(encode(pf_add(fx, fy)));
                r.mul_[x * size + y] =
                    static_cast<uint8_t>(encode(pf_mod(pf_mul(fx, fy), modulus)));
            }
        }
        r.one_ = 1;
        return r;
    }

    static FiniteRing field(uint64_t p, int degree) {
        IrreduciblePolyStream stream(p);
        PolyFp irred = stream.next();
        while (irred.degree() < degree) irred = stream.next();
        if (irred.degree() != degree) throw Error("no irreducible of the requested degree");
        size_t q = 1;
        for (int i = 0; i < degree; ++i) q *= p;
        return poly_quotient(p, irred, "GF(" + std::to_string(q) + ")");
    }

    static FiniteRing dual_numbers(uint64_t p, int degree) {
        std::vector<uint64_t> c(static_cast<size_t>(degree) + 1, 0);
        c.back() = 1;
        return poly_quotient(p, pf_make(p, std::move(c)),
                             "GF(" + std::to_string(p) + ")[t]/(t^" + std::to_string(degree) +
                                 ")");
    }

    static FiniteRing product(const FiniteRing& a, const FiniteRing& b) {
        FiniteRing r;
        r.name_ = a.name_ + "x" + b.name_;
        r.size_ = a.size_ * b.size_;
        if (r.size_ > 64) throw BoundError("finite ring too large for tables");
        r.add_.resize(r.size_ * r.size_);
        r.mul_.resize(r.size_ * r.size_);
        auto pack = [&](size_t x, size_t y) { return x * b.size_ + y; };
        for (size_t x1 = 0; x1 < a.size_; ++x1)
            for (size_t y1 = 0; y1 < b.size_; ++y1)
                for (size_t x2 = 0; x2 < a.size_; ++x2)
                    for (size_t y2 = 0; y2 < b.size_; ++y2) {
                        size_t lhs = pack(x1, y1), rhs = pack(x2, y2);
                        r.add_[lhs * r.size_ + rhs] = static_cast<uint8_t>(
                            pack(a.add(static_cast<uint8_t>(x1), static_cast<uint8_t>(x2)),
                                 b.add(static_cast<uint8_t>(y1), static_cast<uint8_t>(y2))));
                        r.mul_[lhs * r.size_ + rhs] = static_cast<uint8_t>(
                            pack(a.mul(static_cast<uint8_t>(x1), static_cast<uint8_t>(x2)),
                                 b.mul(static_cast<uint8_t>(y1), static_cast<uint8_t>(y2))));
                    }
        r.one_ = static_cast<uint8_t>(pack(a.one_, b.one_));
        return r;
    }

    const std::string& name() const { return name_; }
    size_t size() const { return size_; }
    uint8_t zero() const { return 0; }
    uint8_t one() const { return one_; }
    uint8_t add(uint8_t x, uint8_t y) const { return add_[x * size_ + y]; }
    uint8_t mul(uint8_t x, uint8_t y) const { return mul_[x * size_ + y]; }

    uint8_t add_times(uint8_t x, uint64_t times) const {
        uint8_t acc = 0;
        for (uint64_t i = 0; i < times; ++i) acc = add(acc, x);
        return acc;
    }

    std::vector<uint8_t> idempotents() const {
        std::vector<uint8_t> out;
        for (size_t x = 0; x < size_; ++x)
            if (mul(static_cast<uint8_t>(x), static_cast<uint8_t>(x)) == x)
                out.push_back(static_cast<uint8_t>(x));
        return out;
    }

private:
    std::string name_;
    size_t size_ = 0;
    std::vector<uint8_t> add_;
    std::vector<uint8_t> mul_;
    uint8_t one_ = 0;
};

/// Commutative unital rings of size <= 8 used as epimorphism targets.
inline std::vector<FiniteRing> small_ring_catalog() {
    std::vector<FiniteRing> out;
    out.push_back(FiniteRing::zero_ring());
    for (unsigned m = 2; m <= 8; ++m) out.push_back(FiniteRing::cyclic(m));
    out.push_back(FiniteRing::field(2, 2));  // GF(4)
    out.push_back(FiniteRing::field(2, 3));  // GF(8)
    out.push_back(FiniteRing::dual_numbers(2, 2));
    out.push_back(FiniteRing::dual_numbers(2, 3));
    FiniteRing z2 = FiniteRing::cyclic(2);
    out.push_back(FiniteRing::product(z2, z2));
    out.push_back(FiniteRing::product(z2, FiniteRing::cyclic(3)));
    out.push_back(FiniteRing::product(z2, FiniteRing::cyclic(4)));
    out.push_back(FiniteRing::product(z2, FiniteRing::product(z2, z2)));
    out.push_back(FiniteRing::product(z2, FiniteRing::field(2, 2)));
    out.push_back(FiniteRing::product(z2, FiniteRing::dual_numbers(2, 2)));
    return out;
}

struct EpimorphismReport {
    struct Target {
        std::string name;
        size_t size;
        size_t hom_count;
    };
    std::vector<Target> targets;
    bool at_most_one_everywhere = true;
    std::string note =
        "evidence only: at most one unital homomorphism out of T(Z/n) into each "
        "catalog ring, as forced by composition with the epimorphism from Z/n";

    json to_json() const {
        json j;
        json arr = json::array();
        for (auto& t : targets)
            arr.push_back(json{{"target", t.name}, {"size", t.size}, {"homs", t.hom_count}});
        j["targets"] = arr;
        j["at_most_one_everywhere"] = at_most_one_everywhere;
        j["note"] = note;
        return j;
    }
};

/// Enumerates all unital ring homomorphisms T(Z/n) -> S for each catalog ring
/// S. A hom is determined by the images of the component unit idempotents:
/// orthogonal idempotents summing to 1 whose corners absorb the component
/// characteristics. Each enumerated hom is verified on all element pairs.
inline EpimorphismReport epimorphism_evidence(const RingSpec& ring,
                                              const std::vector<FiniteRing>& catalog =
                                                  small_ring_catalog()) {
    if (ring.kind() != RingKind::Modular) throw Error("epimorphism_evidence expects Z/n");
    if (ring.modulus() > 10)
        throw BoundError("epimorphism evidence is restricted to n <= 10");
    VnrRing t = VnrRing::for_modulus(ring.modulus());
    const size_t k = t.component_count();
    uint64_t tsize = *t.element_count();

    // Enumerate the elements of T once.
    std::vector<VnrElem> elems;
    {
        VnrElem e = t.zero();
        do {
            elems.push_back(e);
        } while (t.next_element(e));
    }

    EpimorphismReport rep;
    for (const FiniteRing& s : catalog) {
        std::vector<uint8_t> idem = s.idempotents();
        size_t homs = 0;
        std::vector<size_t> choice(k, 0);
        // Odometer over k-tuples of idempotents of S.
        while (true) {
            bool valid = true;
            uint8_t sum = s.zero();
            for (size_t i = 0; i < k && valid; ++i) {
                uint8_t fi = idem[choice[i]];
                sum = s.add(sum, fi);
                if (s.add_times(fi, t.component_primes()[i]) != s.zero()) valid = false;
                for (size_t j = 0; j < i && valid; ++j)
                    if (s.mul(fi, idem[choice[j]]) != s.zero()) valid = false;
            }
            if (valid && sum == s.one()) {
                auto h = [&](const VnrElem& x) {
                    uint8_t acc = s.zero();
                    for (size_t i = 0; i < k; ++i)
                        acc = s.add(acc, s.add_times(idem[choice[i]], x.r[i]));
                    return acc;
                };
                bool is_hom = h(t.one()) == s.one();
                for (uint64_t x = 0; x < tsize && is_hom; ++x)
                    for (uint64_t y = 0; y < tsize && is_hom; ++y) {
                        if (h(t.add(elems[x], elems[y])) != s.add(h(elems[x]), h(elems[y])))
                            is_hom = false;
                        if (h(t.mul(elems[x], elems[y])) != s.mul(h(elems[x]), h(elems[y])))
                            is_hom = false;
                    }
                if (is_hom) ++homs;
            }
            size_t pos = 0;
            while (pos < k && ++choice[pos] == idem.size()) choice[pos++] = 0;
            if (pos == k) break;
        }
        rep.targets.push_back({s.name(), s.size(), homs});
        if (homs > 1) rep.at_most_one_everywhere = false;
    }
    return rep;
}

} // namespace spectopo
