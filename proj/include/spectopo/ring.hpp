#pragma once

// The three supported coefficient rings -- Z, Z/n, GF(p)[x] -- with canonical
// element forms, exact arithmetic, units, and complete factorization.

#include <cctype>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spectopo/errors.hpp"
#include "spectopo/integers.hpp"
#include "spectopo/poly_fp.hpp"

namespace spectopo {

enum class RingKind { Integers, Modular, PolyOverPrimeField };

class RingSpec {
public:
    static RingSpec integers() { return RingSpec(RingKind::Integers, 0, 0); }

    static RingSpec modular(Int n) {
        if (n < 2) throw Error("Z/n requires n >= 2");
        return RingSpec(RingKind::Modular, std::move(n), 0);
    }

    static RingSpec poly_field(uint64_t p) {
        if (p < 2 || p >= (uint64_t(1) << 62) || !is_prime(Int(p)))
            throw Error("GF(p)[x] requires a prime p below 2^62");
        return RingSpec(RingKind::PolyOverPrimeField, 0, p);
    }

    RingKind kind() const { return kind_; }
    const Int& modulus() const { return n_; }
    uint64_t field_char() const { return p_; }

    bool has_infinite_spectrum() const { return kind_ != RingKind::Modular; }

    std::string to_string() const {
        switch (kind_) {
            case RingKind::Integers: return "Z";
            case RingKind::Modular: return "Z/" + n_.str();
            case RingKind::PolyOverPrimeField: return "GF(" + std::to_string(p_) + ")[x]";
        }
        return "?";
    }

    friend bool operator==(const RingSpec& a, const RingSpec& b) {
        return a.kind_ == b.kind_ && a.n_ == b.n_ && a.p_ == b.p_;
    }
    friend bool operator!=(const RingSpec& a, const RingSpec& b) { return !(a == b); }

private:
    RingSpec(RingKind k, Int n, uint64_t p) : kind_(k), n_(std::move(n)), p_(p) {}

    RingKind kind_;
    Int n_;
    uint64_t p_;
};

inline void require_same_ring(const RingSpec& a, const RingSpec& b) {
    if (a != b)
        throw RingMismatchError("mixed rings: " + a.to_string() + " vs " + b.to_string());
}

/// An element in canonical form: plain integer for Z, residue in [0, n) for
/// Z/n, trimmed coefficient vector for GF(p)[x].
class RingElement {
public:
    static RingElement from_int(const RingSpec& ring, Int v) {
        switch (ring.kind()) {
            case RingKind::Integers:
                return RingElement(ring, std::move(v));
            case RingKind::Modular:
                return RingElement(ring, mod_nonneg(v, ring.modulus()));
            case RingKind::PolyOverPrimeField:
                return RingElement(
                    ring, pf_const(ring.field_char(),
                                   static_cast<uint64_t>(mod_nonneg(v, Int(ring.field_char())))));
        }
        throw Error("unreachable");
    }

    static RingElement from_poly(const RingSpec& ring, PolyFp f) {
        if (ring.kind() != RingKind::PolyOverPrimeField || f.p != ring.field_char())
            throw RingMismatchError("polynomial payload does not match " + ring.to_string());
        pf_trim(f);
        return RingElement(ring, std::move(f));
    }

    static RingElement zero(const RingSpec& ring) { return from_int(ring, 0); }
    static RingElement one(const RingSpec& ring) { return from_int(ring, 1); }

    const RingSpec& ring() const { return ring_; }
    bool is_int() const { return std::holds_alternative<Int>(payload_); }
    const Int& as_int() const { return std::get<Int>(payload_); }
    const PolyFp& as_poly() const { return std::get<PolyFp>(payload_); }

    bool is_zero() const {
        return is_int() ? as_int() == 0 : as_poly().is_zero();
    }

    std::string to_string() const {
        return is_int() ? as_int().str() : pf_to_string(as_poly());
    }

    friend bool operator==(const RingElement& a, const RingElement& b) {
        require_same_ring(a.ring_, b.ring_);
        return a.payload_ == b.payload_;
    }
    friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

    friend RingElement operator+(const RingElement& a, const RingElement& b) {
        require_same_ring(a.ring_, b.ring_);
        if (a.is_int()) return from_int(a.ring_, a.as_int() + b.as_int());
        return from_poly(a.ring_, pf_add(a.as_poly(), b.as_poly()));
    }

    friend RingElement operator*(const RingElement& a, const RingElement& b) {
        require_same_ring(a.ring_, b.ring_);
        if (a.is_int()) return from_int(a.ring_, a.as_int() * b.as_int());
        return from_poly(a.ring_, pf_mul(a.as_poly(), b.as_poly()));
    }

    friend RingElement operator-(const RingElement& a) {
        if (a.is_int()) return from_int(a.ring_, -a.as_int());
        return from_poly(a.ring_, pf_neg(a.as_poly()));
    }

    friend RingElement operator-(const RingElement& a, const RingElement& b) {
        return a + (-b);
    }

    RingElement pow(unsigned e) const {
        RingElement r = one(ring_), base = *this;
        while (e) {
            if (e & 1) r = r * base;
            if (e >>= 1) base = base * base;
        }
        return r;
    }

private:
    RingElement(RingSpec ring, Int v) : ring_(std::move(ring)), payload_(std::move(v)) {}
    RingElement(RingSpec ring, PolyFp f) : ring_(std::move(ring)), payload_(std::move(f)) {}

    RingSpec ring_;
    std::variant<Int, PolyFp> payload_;
};

inline bool is_unit(const RingElement& a) {
    switch (a.ring().kind()) {
        case RingKind::Integers:
            return a.as_int() == 1 || a.as_int() == -1;
        case RingKind::Modular:
            return gcd_int(a.as_int(), a.ring().modulus()) == 1;
        case RingKind::PolyOverPrimeField:
            return a.as_poly().degree() == 0;
    }
    return false;
}

/// unit * prod(prime^multiplicity) == the factored element, exactly.
struct Factorization {
    RingElement unit;
    std::vector<std::pair<RingElement, unsigned>> factors;

    RingElement reconstruct() const {
        RingElement r = unit;
        for (auto& [p, e] : factors) r = r * p.pow(e);
        return r;
    }
};

namespace detail {

/// A unit u of Z/n with u*g == a, where g = gcd(lift(a), n). Exists for every
/// nonzero a; the smallest coprime lift is taken for canonicity.
inline Int unit_cofactor(const Int& lift, const Int& g, const Int& n) {
    Int h = n / g;
    Int u = mod_nonneg(lift / g, h);
    if (u == 0) u = h; // only when h == 1
    while (gcd_int(u, n) != 1) u += h;
    return u % n;
}

} // namespace detail

/// Complete factorization into canonical primes (positive prime integers,
/// monic irreducibles). For Z/n the primes are those dividing gcd(lift(a), n).
inline Factorization factor(const RingElement& a) {
    const RingSpec& ring = a.ring();
    if (a.is_zero()) throw ZeroElementError("factor(0) is undefined in " + ring.to_string());
    Factorization out{RingElement::one(ring), {}};
    switch (ring.kind()) {
        case RingKind::Integers: {
            Int v = a.as_int();
            if (v < 0) {
                out.unit = RingElement::from_int(ring, -1);
                v = -v;
            }
            for (auto& [p, e] : factor_integer(v))
                out.factors.emplace_back(RingElement::from_int(ring, p), e);
            break;
        }
        case RingKind::Modular: {
            const Int& n = ring.modulus();
            Int g = gcd_int(a.as_int(), n);
            if (g == 1) {
                out.unit = a;
                break;
            }
            out.unit = RingElement::from_int(ring, detail::unit_cofactor(a.as_int(), g, n));
            for (auto& [p, e] : factor_integer(g))
                out.factors.emplace_back(RingElement::from_int(ring, p), e);
            break;
        }
        case RingKind::PolyOverPrimeField: {
            const PolyFp& f = a.as_poly();
            out.unit = RingElement::from_poly(ring, pf_const(f.p, f.leading()));
            for (auto& [q, e] : pf_factor(f))
                out.factors.emplace_back(RingElement::from_poly(ring, q), e);
            break;
        }
    }
    return out;
}

/// Draws a pseudorandom ring element (deterministic in the generator state).
inline RingElement random_element(const RingSpec& ring, std::mt19937_64& rng) {
    switch (ring.kind()) {
        case RingKind::Integers: {
            std::uniform_int_distribution<int64_t> dist(-1000000, 1000000);
            return RingElement::from_int(ring, Int(dist(rng)));
        }
        case RingKind::Modular: {
            Int n = ring.modulus();
            std::uniform_int_distribution<uint64_t> dist(0, 1u << 30);
            Int v = 0;
            for (int i = 0; i < 3; ++i) v = (v << 30) + dist(rng);
            return RingElement::from_int(ring, mod_nonneg(v, n));
        }
        case RingKind::PolyOverPrimeField: {
            std::uniform_int_distribution<int> deg_dist(0, 6);
            std::uniform_int_distribution<uint64_t> coef(0, ring.field_char() - 1);
            int d = deg_dist(rng);
            std::vector<uint64_t> c(static_cast<size_t>(d) + 1);
            for (auto& v : c) v = coef(rng);
            return RingElement::from_poly(ring, pf_make(ring.field_char(), std::move(c)));
        }
    }
    throw Error("unreachable");
}

/// Ring grammar: "Z", "Z/<n>", "GF(<p>)[x]".
inline RingSpec parse_ring(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s == "Z") return RingSpec::integers();
    if (s.rfind("Z/", 0) == 0) {
        try {
            return RingSpec::modular(Int(s.substr(2)));
        } catch (const std::exception&) {
            throw Error("bad modulus in ring literal: " + text);
        }
    }
    if (s.rfind("GF(", 0) == 0 && s.size() > 7 && s.substr(s.size() - 4) == ")[x]") {
        std::string inner = s.substr(3, s.size() - 7);
        try {
            return RingSpec::poly_field(std::stoull(inner));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("bad characteristic in ring literal: " + text);
        }
    }
    throw Error("unknown ring literal: " + text + " (expected Z, Z/<n>, or GF(<p>)[x])");
}

/// Element grammar: decimal integers; polynomials such as "x^3+2x+1".
inline RingElement parse_element(const RingSpec& ring, const std::string& text) {
    if (ring.kind() == RingKind::PolyOverPrimeField)
        return RingElement::from_poly(ring, pf_parse(ring.field_char(), text));
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw Error("empty element literal");
    size_t i = s[0] == '-' || s[0] == '+' ? 1 : 0;
    if (i == s.size()) throw Error("bad element literal: " + text);
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw Error("bad element literal for " + ring.to_string() + ": " + text);
    return RingElement::from_int(ring, Int(s));
}

} // namespace spectopo
