#pragma once

// Exact integer arithmetic: primality testing and complete factorization.
//
// Primality: trial division, then deterministic Miller-Rabin below 2^64
// (fixed witness set), Baillie-PSW beyond.
// Factorization: trial division by primes < 10^4, perfect-power extraction,
// then Pollard rho with Brent cycle detection.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spectopo/errors.hpp"

namespace spectopo {

using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(abs_int(a), abs_int(b));
}

inline Int mod_nonneg(const Int& a, const Int& n) {
    Int r = a % n;
    if (r < 0) r += n;
    return r;
}

inline Int powmod(const Int& base, const Int& exp, const Int& mod) {
    return boost::multiprecision::powm(mod_nonneg(base, mod), exp, mod);
}

/// Primes below 10^4, sieved once.
inline const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        constexpr uint32_t bound = 10000;
        std::vector<bool> composite(bound, false);
        std::vector<uint32_t> out;
        for (uint32_t i = 2; i < bound; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (uint32_t j = 2 * i; j < bound; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

/// Jacobi symbol (a / n) for odd n > 0.
inline int jacobi(Int a, Int n) {
    a = mod_nonneg(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a >>= 1;
            Int r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

inline bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    Int r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

/// Floor of the k-th root via binary search.
inline Int kth_root_floor(const Int& n, unsigned k) {
    if (n < 0 || k == 0) throw Error("kth_root_floor: bad arguments");
    if (n < 2 || k == 1) return n;
    Int lo = 1, hi = Int(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / k + 1);
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, k) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

inline bool strong_probable_prime(const Int& n, const Int& a) {
    if (a % n == 0) return true;
    Int d = n - 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d >>= 1;
        ++s;
    }
    Int x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

/// Strong Lucas test with Selfridge's parameter choice.
inline bool strong_lucas_probable_prime(const Int& n) {
    if (is_perfect_square(n)) return false;
    Int d_param = 5;
    while (true) {
        int j = jacobi(d_param, n);
        if (j == 0 && abs_int(d_param) != n) return false;
        if (j == -1) break;
        d_param = d_param > 0 ? Int(-(d_param + 2)) : Int(-(d_param - 2));
    }
    Int p_param = 1;
    Int q_param = (1 - d_param) / 4;

    Int d = n + 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d >>= 1;
        ++s;
    }

    auto half_mod = [&](Int x) {
        x = mod_nonneg(x, n);
        if (x % 2 != 0) x += n;
        return Int((x >> 1) % n);
    };

    // Binary ladder producing (U_d, V_d, Q^d).
    Int u = 1, v = p_param, qk = mod_nonneg(q_param, n);
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(d));
    for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
        Int u2 = mod_nonneg(u * v, n);
        Int v2 = mod_nonneg(v * v - 2 * qk, n);
        qk = mod_nonneg(qk * qk, n);
        if (boost::multiprecision::bit_test(d, static_cast<unsigned>(i))) {
            u = half_mod(p_param * u2 + v2);
            v = half_mod(d_param * u2 + p_param * v2);
            qk = mod_nonneg(qk * q_param, n);
        } else {
            u = u2;
            v = v2;
        }
    }
    if (u == 0 || v == 0) return true;
    for (unsigned r = 1; r < s; ++r) {
        v = mod_nonneg(v * v - 2 * qk, n);
        if (v == 0) return true;
        qk = mod_nonneg(qk * qk, n);
    }
    return false;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (uint32_t p : small_primes()) {
        Int pp(p);
        if (pp * pp > n) return true;
        if (n % pp == 0) return n == pp;
    }
    static const Int two_64 = Int(1) << 64;
    if (n < two_64) {
        // Deterministic witness set for the 64-bit range.
        for (uint32_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
            if (!strong_probable_prime(n, Int(a))) return false;
        }
        return true;
    }
    return strong_probable_prime(n, Int(2)) && strong_lucas_probable_prime(n);
}

/// One nontrivial factor of an odd composite n (Brent's variant of Pollard rho).
inline Int pollard_rho_brent(const Int& n) {
    for (Int c = 1;; ++c) {
        Int y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
        const Int m = 128;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = std::min(m, Int(r - k));
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = (q * abs_int(x - y)) % n;
                }
                g = gcd_int(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                g = gcd_int(abs_int(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

/// Complete factorization of n >= 1 into (prime, multiplicity) pairs, sorted.
inline std::vector<std::pair<Int, unsigned>> factor_integer(Int n) {
    if (n < 1) throw Error("factor_integer requires n >= 1");
    std::vector<std::pair<Int, unsigned>> out;
    for (uint32_t p : small_primes()) {
        if (Int(p) * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(Int(p), e);
        }
    }
    if (n > 1) {
        std::vector<std::pair<Int, unsigned>> stack{{n, 1}};
        while (!stack.empty()) {
            auto [m, mult] = stack.back();
            stack.pop_back();
            if (is_prime(m)) {
                out.emplace_back(m, mult);
                continue;
            }
            bool split = false;
            for (unsigned k = 2; !split && (Int(1) << k) <= m; ++k) {
                Int r = kth_root_floor(m, k);
                if (r > 1 && boost::multiprecision::pow(r, k) == m) {
                    stack.emplace_back(r, mult * k);
                    split = true;
                }
            }
            if (split) continue;
            Int d = pollard_rho_brent(m);
            stack.emplace_back(d, mult);
            stack.emplace_back(m / d, mult);
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<std::pair<Int, unsigned>> merged;
    for (auto& [p, e] : out) {
        if (!merged.empty() && merged.back().first == p)
            merged.back().second += e;
        else
            merged.emplace_back(p, e);
    }
    return merged;
}

inline bool is_squarefree(const Int& n) {
    for (auto& [p, e] : factor_integer(abs_int(n))) {
        (void)p;
        if (e > 1) return false;
    }
    return true;
}

/// Modular inverse of a mod m for gcd(a, m) = 1.
inline Int invmod(const Int& a, const Int& m) {
    Int old_r = mod_nonneg(a, m), r = m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error("invmod: arguments are not coprime");
    return mod_nonneg(old_s, m);
}

} // namespace spectopo
