#pragma once

// Univariate polynomials over a prime field F_p with exact arithmetic and
// complete factorization (squarefree decomposition, distinct-degree,
// Cantor-Zassenhaus equal-degree splitting).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spectopo/errors.hpp"
#include "spectopo/integers.hpp"

namespace spectopo {

/// Coefficient vector c[i]*x^i over F_p; no trailing zeros, empty == 0.
struct PolyFp {
    uint64_t p = 2;
    std::vector<uint64_t> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_constant() const { return c.size() <= 1; }
    uint64_t leading() const { return c.empty() ? 0 : c.back(); }

    friend bool operator==(const PolyFp& a, const PolyFp& b) {
        return a.p == b.p && a.c == b.c;
    }
};

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod_u64(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

} // namespace detail

inline void pf_trim(PolyFp& f) {
    while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
}

inline PolyFp pf_make(uint64_t p, std::vector<uint64_t> coeffs) {
    PolyFp f{p, std::move(coeffs)};
    for (auto& v : f.c) v %= p;
    pf_trim(f);
    return f;
}

inline PolyFp pf_zero(uint64_t p) { return PolyFp{p, {}}; }
inline PolyFp pf_const(uint64_t p, uint64_t v) { return pf_make(p, {v}); }
inline PolyFp pf_x(uint64_t p) { return pf_make(p, {0, 1}); }

inline PolyFp pf_add(const PolyFp& a, const PolyFp& b) {
    PolyFp r{a.p, {}};
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = (r.c[i] + b.c[i]) % a.p;
    pf_trim(r);
    return r;
}

inline PolyFp pf_neg(const PolyFp& a) {
    PolyFp r = a;
    for (auto& v : r.c) v = v ? a.p - v : 0;
    return r;
}

inline PolyFp pf_sub(const PolyFp& a, const PolyFp& b) { return pf_add(a, pf_neg(b)); }

inline PolyFp pf_mul(const PolyFp& a, const PolyFp& b) {
    if (a.is_zero() || b.is_zero()) return pf_zero(a.p);
    std::vector<uint64_t> r(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            r[i + j] = (r[i + j] + detail::mulmod_u64(a.c[i], b.c[j], a.p)) % a.p;
        }
    }
    PolyFp out{a.p, std::move(r)};
    pf_trim(out);
    return out;
}

inline PolyFp pf_scale(const PolyFp& a, uint64_t s) {
    PolyFp r = a;
    s %= a.p;
    for (auto& v : r.c) v = detail::mulmod_u64(v, s, a.p);
    pf_trim(r);
    return r;
}

/// Euclidean division a = q*b + r with deg r < deg b; b != 0.
inline std::pair<PolyFp, PolyFp> pf_divmod(const PolyFp& a, const PolyFp& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    const uint64_t p = a.p;
    if (a.degree() < b.degree()) return {pf_zero(p), a};
    std::vector<uint64_t> rem = a.c;
    std::vector<uint64_t> quot(a.c.size() - b.c.size() + 1, 0);
    uint64_t lead_inv = detail::invmod_u64(b.leading(), p);
    for (int i = static_cast<int>(rem.size()) - 1; i >= b.degree(); --i) {
        uint64_t coef = detail::mulmod_u64(rem[static_cast<size_t>(i)], lead_inv, p);
        if (coef == 0) continue;
        quot[static_cast<size_t>(i - b.degree())] = coef;
        for (size_t j = 0; j < b.c.size(); ++j) {
            size_t k = static_cast<size_t>(i - b.degree()) + j;
            uint64_t sub = detail::mulmod_u64(coef, b.c[j], p);
            rem[k] = (rem[k] + p - sub) % p;
        }
    }
    PolyFp q{p, std::move(quot)}, r{p, std::move(rem)};
    pf_trim(q);
    pf_trim(r);
    return {q, r};
}

inline PolyFp pf_mod(const PolyFp& a, const PolyFp& b) { return pf_divmod(a, b).second; }
inline PolyFp pf_div(const PolyFp& a, const PolyFp& b) { return pf_divmod(a, b).first; }

inline bool pf_divides(const PolyFp& d, const PolyFp& a) {
    if (d.is_zero()) return a.is_zero();
    return pf_mod(a, d).is_zero();
}

inline PolyFp pf_monic(const PolyFp& a) {
    if (a.is_zero() || a.leading() == 1) return a;
    return pf_scale(a, detail::invmod_u64(a.leading(), a.p));
}

/// Monic gcd.
inline PolyFp pf_gcd(PolyFp a, PolyFp b) {
    while (!b.is_zero()) {
        PolyFp r = pf_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pf_monic(a);
}

inline PolyFp pf_powmod(PolyFp base, Int e, const PolyFp& mod) {
    PolyFp result = pf_const(base.p, 1);
    base = pf_mod(base, mod);
    while (e > 0) {
        if (e % 2 == 1) result = pf_mod(pf_mul(result, base), mod);
        e >>= 1;
        if (e > 0) base = pf_mod(pf_mul(base, base), mod);
    }
    return result;
}

inline PolyFp pf_derivative(const PolyFp& a) {
    PolyFp r{a.p, {}};
    for (size_t i = 1; i < a.c.size(); ++i) {
        r.c.push_back(detail::mulmod_u64(a.c[i], i % a.p, a.p));
    }
    pf_trim(r);
    return r;
}

inline uint64_t pf_eval(const PolyFp& a, uint64_t x) {
    uint64_t r = 0;
    for (size_t i = a.c.size(); i-- > 0;) {
        r = (detail::mulmod_u64(r, x, a.p) + a.c[i]) % a.p;
    }
    return r;
}

/// Canonical order: by degree, then coefficients from the top down.
inline bool pf_less(const PolyFp& a, const PolyFp& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (size_t i = a.c.size(); i-- > 0;) {
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    }
    return false;
}

/// f(x) = g(x)^p componentwise root; valid when f' = 0 (so f = sum c_i x^{p i},
/// and c^(1/p) = c over the prime field).
inline PolyFp pf_pth_root(const PolyFp& f) {
    PolyFp g{f.p, {}};
    for (size_t i = 0; i < f.c.size(); i += f.p) {
        g.c.push_back(f.c[i]);
    }
    pf_trim(g);
    return g;
}

/// Squarefree decomposition of a monic f: pairs (g, m) with f = prod g^m,
/// the g monic squarefree and pairwise coprime.
inline std::vector<std::pair<PolyFp, unsigned>> pf_squarefree_decomposition(PolyFp f) {
    std::vector<std::pair<PolyFp, unsigned>> out;
    if (f.degree() < 1) return out;
    unsigned scale = 1;
    while (f.degree() > 0) {
        PolyFp fp = pf_derivative(f);
        if (fp.is_zero()) {
            f = pf_pth_root(f);
            scale *= static_cast<unsigned>(f.p);
            continue;
        }
        PolyFp g = pf_gcd(f, fp);
        PolyFp w = pf_div(f, g);
        unsigned j = 1;
        while (w.degree() > 0) {
            PolyFp y = pf_gcd(w, g);
            PolyFp z = pf_div(w, y);
            if (z.degree() > 0) out.emplace_back(pf_monic(z), scale * j);
            w = std::move(y);
            g = pf_div(g, w);
            ++j;
        }
        f = g;
    }
    std::sort(out.begin(), out.end(),
              [](auto& a, auto& b) { return pf_less(a.first, b.first); });
    return out;
}

/// Distinct-degree split of a monic squarefree f: pairs (h, d) where h is the
/// product of all irreducible factors of degree d.
inline std::vector<std::pair<PolyFp, unsigned>> pf_distinct_degree(PolyFp f) {
    std::vector<std::pair<PolyFp, unsigned>> out;
    const uint64_t p = f.p;
    PolyFp h = pf_mod(pf_x(p), f);
    unsigned d = 0;
    while (f.degree() > 2 * static_cast<int>(d)) {
        ++d;
        h = pf_powmod(h, Int(p), f);
        PolyFp g = pf_gcd(f, pf_sub(h, pf_x(p)));
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            f = pf_div(f, g);
            h = pf_mod(h, f);
        }
    }
    if (f.degree() > 0) out.emplace_back(f, static_cast<unsigned>(f.degree()));
    return out;
}

namespace detail {

inline PolyFp random_poly(uint64_t p, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<uint64_t> dist(0, p - 1);
    std::vector<uint64_t> c(static_cast<size_t>(max_deg) + 1);
    for (auto& v : c) v = dist(rng);
    return pf_make(p, std::move(c));
}

inline void equal_degree_split(const PolyFp& f, unsigned d, std::mt19937_64& rng,
                               std::vector<PolyFp>& out) {
    if (f.degree() == static_cast<int>(d)) {
        out.push_back(pf_monic(f));
        return;
    }
    const uint64_t p = f.p;
    while (true) {
        PolyFp h = random_poly(p, f.degree() - 1, rng);
        if (h.degree() < 1) continue;
        PolyFp g;
        if (p == 2) {
            // Trace map over F_2.
            PolyFp t = pf_zero(p), cur = pf_mod(h, f);
            for (unsigned i = 0; i < d; ++i) {
                t = pf_add(t, cur);
                cur = pf_mod(pf_mul(cur, cur), f);
            }
            g = pf_gcd(f, t);
        } else {
            Int e = (boost::multiprecision::pow(Int(p), d) - 1) / 2;
            PolyFp t = pf_powmod(h, e, f);
            g = pf_gcd(f, pf_sub(t, pf_const(p, 1)));
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(pf_div(f, g), d, rng, out);
            return;
        }
    }
}

inline uint64_t poly_hash(const PolyFp& f) {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ f.p;
    for (uint64_t v : f.c) h = (h * 0x100000001b3ULL) ^ v;
    return h;
}

} // namespace detail

/// Complete factorization of a nonzero f into monic irreducibles with
/// multiplicities, sorted canonically. Deterministic for equal inputs.
inline std::vector<std::pair<PolyFp, unsigned>> pf_factor(const PolyFp& f) {
    if (f.is_zero()) throw ZeroElementError("cannot factor the zero polynomial");
    std::vector<std::pair<PolyFp, unsigned>> out;
    if (f.degree() < 1) return out;
    std::mt19937_64 rng(detail::poly_hash(f));
    for (auto& [g, m] : pf_squarefree_decomposition(pf_monic(f))) {
        for (auto& [h, d] : pf_distinct_degree(g)) {
            std::vector<PolyFp> irr;
            detail::equal_degree_split(h, d, rng, irr);
            for (auto& q : irr) out.emplace_back(q, m);
        }
    }
    std::sort(out.begin(), out.end(),
              [](auto& a, auto& b) { return pf_less(a.first, b.first); });
    return out;
}

/// Irreducibility over F_p: no irreducible factor of degree <= deg/2.
inline bool pf_is_irreducible(const PolyFp& f) {
    if (f.degree() < 1) return false;
    PolyFp m = pf_monic(f);
    const uint64_t p = m.p;
    PolyFp h = pf_mod(pf_x(p), m);
    for (int d = 1; 2 * d <= m.degree(); ++d) {
        h = pf_powmod(h, Int(p), m);
        if (pf_gcd(m, pf_sub(h, pf_x(p))).degree() > 0) return false;
    }
    return true;
}

/// The index-th monic polynomial of the given degree, ordered canonically
/// (low-order coefficients are the low base-p digits of a reversed index).
inline PolyFp pf_monic_by_index(uint64_t p, int degree, const Int& index) {
    std::vector<uint64_t> c(static_cast<size_t>(degree) + 1, 0);
    c[static_cast<size_t>(degree)] = 1;
    Int idx = index;
    for (int i = 0; i < degree && idx > 0; ++i) {
        c[static_cast<size_t>(i)] = static_cast<uint64_t>(idx % p);
        idx /= p;
    }
    return pf_make(p, std::move(c));
}

/// Enumerates monic irreducible polynomials in canonical order.
class IrreduciblePolyStream {
public:
    explicit IrreduciblePolyStream(uint64_t p) : p_(p), degree_(1), index_(0) {}

    PolyFp next() {
        while (true) {
            if (index_ >= boost::multiprecision::pow(Int(p_), static_cast<unsigned>(degree_))) {
                ++degree_;
                index_ = 0;
            }
            PolyFp f = pf_monic_by_index(p_, degree_, index_);
            ++index_;
            if (pf_is_irreducible(f)) return f;
        }
    }

private:
    uint64_t p_;
    int degree_;
    Int index_;
};

/// Renders "x^3+2x+1"; zero polynomial renders as "0".
inline std::string pf_to_string(const PolyFp& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        uint64_t v = f.c[static_cast<size_t>(i)];
        if (v == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << v;
        } else {
            if (v != 1) os << v;
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

/// Parses the term grammar "x^3+2x+1" (also accepts '-' signs and spaces).
inline PolyFp pf_parse(uint64_t p, const std::string& text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw Error("empty polynomial literal");
    std::vector<uint64_t> coeffs;
    auto add_term = [&](Int coef, unsigned exp) {
        if (coeffs.size() <= exp) coeffs.resize(exp + 1, 0);
        Int v = mod_nonneg(Int(coeffs[exp]) + coef, Int(p));
        coeffs[exp] = static_cast<uint64_t>(v);
    };
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        if (i >= s.size()) throw Error("dangling sign in polynomial: " + text);
        Int coef = -1;
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) coef = Int(s.substr(start, i - start));
        unsigned exp = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t es = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == es) throw Error("missing exponent in polynomial: " + text);
                exp = static_cast<unsigned>(std::stoul(s.substr(es, i - es)));
            }
        } else if (coef < 0) {
            throw Error("malformed polynomial term in: " + text);
        }
        if (coef < 0) coef = 1;
        add_term(sign * coef, exp);
    }
    return pf_make(p, std::move(coeffs));
}

} // namespace spectopo
