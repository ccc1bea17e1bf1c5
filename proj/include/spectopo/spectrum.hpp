#pragma once

// Points and subsets of Spec(R): prime ideals in canonical form, the V and D
// operators, Zariski closure, and a closed algebra of subset representations
// (finite, cofinite, and predicate-backed with explicit infinitude).

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spectopo/errors.hpp"
#include "spectopo/ring.hpp"

namespace spectopo {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Closed-point generators

/// Generator of a closed prime: a positive prime integer (Z and Z/n) or a
/// monic irreducible polynomial (GF(p)[x]).
using PrimeGen = std::variant<Int, PolyFp>;

inline bool prime_gen_less(const PrimeGen& a, const PrimeGen& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (std::holds_alternative<Int>(a))
        return std::get<Int>(a) < std::get<Int>(b);
    return pf_less(std::get<PolyFp>(a), std::get<PolyFp>(b));
}

inline bool prime_gen_eq(const PrimeGen& a, const PrimeGen& b) {
    return !prime_gen_less(a, b) && !prime_gen_less(b, a);
}

inline std::string prime_gen_str(const PrimeGen& g) {
    if (std::holds_alternative<Int>(g)) return std::get<Int>(g).str();
    return pf_to_string(std::get<PolyFp>(g));
}

inline bool is_canonical_prime(const RingSpec& ring, const PrimeGen& g) {
    switch (ring.kind()) {
        case RingKind::Integers:
            return std::holds_alternative<Int>(g) && std::get<Int>(g) > 0 &&
                   is_prime(std::get<Int>(g));
        case RingKind::Modular:
            return std::holds_alternative<Int>(g) && std::get<Int>(g) > 0 &&
                   ring.modulus() % std::get<Int>(g) == 0 && is_prime(std::get<Int>(g));
        case RingKind::PolyOverPrimeField:
            return std::holds_alternative<PolyFp>(g) &&
                   std::get<PolyFp>(g).p == ring.field_char() &&
                   std::get<PolyFp>(g).leading() == 1 && pf_is_irreducible(std::get<PolyFp>(g));
    }
    return false;
}

inline std::vector<PrimeGen> sorted_unique(std::vector<PrimeGen> v) {
    std::sort(v.begin(), v.end(), prime_gen_less);
    v.erase(std::unique(v.begin(), v.end(), prime_gen_eq), v.end());
    return v;
}

// ---------------------------------------------------------------------------
// Prime ideals

/// A point of Spec(R): the generic point (zero ideal of a domain with
/// infinite spectrum) or a closed point given by its canonical prime.
class PrimeIdeal {
public:
    static PrimeIdeal generic(const RingSpec& ring) {
        if (!ring.has_infinite_spectrum())
            throw Error("no generic point: " + ring.to_string() + " has a finite spectrum");
        return PrimeIdeal(ring, std::nullopt);
    }

    static PrimeIdeal closed(const RingSpec& ring, PrimeGen g) {
        if (!is_canonical_prime(ring, g))
            throw Error("not a canonical prime of " + ring.to_string() + ": " + prime_gen_str(g));
        return PrimeIdeal(ring, std::move(g));
    }

    const RingSpec& ring() const { return ring_; }
    bool is_generic() const { return !gen_.has_value(); }
    const PrimeGen& generator() const { return *gen_; }

    /// Membership a in P. Generic holds only 0; a closed point (g) holds the
    /// multiples of g (for Z/n: g | lift(a)).
    bool contains(const RingElement& a) const {
        require_same_ring(ring_, a.ring());
        if (is_generic()) return a.is_zero();
        switch (ring_.kind()) {
            case RingKind::Integers:
            case RingKind::Modular:
                return a.as_int() % std::get<Int>(*gen_) == 0;
            case RingKind::PolyOverPrimeField:
                return pf_divides(std::get<PolyFp>(*gen_), a.as_poly());
        }
        return false;
    }

    std::string to_string() const {
        return is_generic() ? "(0)" : "(" + prime_gen_str(*gen_) + ")";
    }

    friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) {
        if (a.ring_ != b.ring_) return false;
        if (a.is_generic() != b.is_generic()) return false;
        return a.is_generic() || prime_gen_eq(*a.gen_, *b.gen_);
    }
    friend bool operator!=(const PrimeIdeal& a, const PrimeIdeal& b) { return !(a == b); }

private:
    PrimeIdeal(RingSpec ring, std::optional<PrimeGen> g)
        : ring_(std::move(ring)), gen_(std::move(g)) {}

    RingSpec ring_;
    std::optional<PrimeGen> gen_;
};

// ---------------------------------------------------------------------------
// Finitely generated ideals

/// A finitely generated ideal, canonically reduced to one generator
/// (gcd in the PID cases; gcd of the lifts and n in Z/n).
class Ideal {
public:
    static Ideal principal(const RingElement& g) { return from_generators(g.ring(), {g}); }

    static Ideal from_generators(const RingSpec& ring, const std::vector<RingElement>& gens) {
        if (gens.empty()) throw Error("an ideal needs at least one generator");
        for (auto& g : gens) require_same_ring(ring, g.ring());
        switch (ring.kind()) {
            case RingKind::Integers: {
                Int g = 0;
                for (auto& e : gens) g = gcd_int(g, e.as_int());
                return Ideal(ring, RingElement::from_int(ring, g));
            }
            case RingKind::Modular: {
                Int g = ring.modulus();
                for (auto& e : gens) g = gcd_int(g, e.as_int());
                return Ideal(ring, RingElement::from_int(ring, g));
            }
            case RingKind::PolyOverPrimeField: {
                PolyFp g = pf_zero(ring.field_char());
                for (auto& e : gens) g = pf_gcd(g, e.as_poly());
                return Ideal(ring, RingElement::from_poly(ring, g));
            }
        }
        throw Error("unreachable");
    }

    const RingSpec& ring() const { return ring_; }
    const RingElement& generator() const { return gen_; }
    bool is_zero() const { return gen_.is_zero(); }

    std::string to_string() const { return "(" + gen_.to_string() + ")"; }

private:
    Ideal(RingSpec ring, RingElement gen) : ring_(std::move(ring)), gen_(std::move(gen)) {}

    RingSpec ring_;
    RingElement gen_;
};

// ---------------------------------------------------------------------------
// Predicate-backed families of closed points

struct PredNode;
using PredPtr = std::shared_ptr<const PredNode>;

/// Intensional families of closed primes. Built-in progressions carry their
/// infinitude structurally; custom predicates carry a declared flag.
struct PredNode {
    enum class Kind { Progression, DegreeProgression, Custom, FiniteLeaf, Union, Intersect, Diff };

    Kind kind;
    uint64_t residue = 0;
    uint64_t modulus = 1;
    std::function<bool(const PrimeGen&)> fn;
    bool custom_infinite = false;
    std::string label;
    std::vector<PrimeGen> points;   // FiniteLeaf contents / Diff removals
    std::vector<PredPtr> children;  // Union / Intersect
    PredPtr base;                   // Diff
};

enum class Infinitude { Finite, Infinite, Unknown };

inline bool pred_member(const PredNode& n, const PrimeGen& g) {
    switch (n.kind) {
        case PredNode::Kind::Progression:
            return std::holds_alternative<Int>(g) &&
                   std::get<Int>(g) % n.modulus == n.residue;
        case PredNode::Kind::DegreeProgression:
            return std::holds_alternative<PolyFp>(g) &&
                   static_cast<uint64_t>(std::get<PolyFp>(g).degree()) % n.modulus == n.residue;
        case PredNode::Kind::Custom:
            return n.fn(g);
        case PredNode::Kind::FiniteLeaf:
            return std::binary_search(n.points.begin(), n.points.end(), g, prime_gen_less);
        case PredNode::Kind::Union:
            for (auto& c : n.children)
                if (pred_member(*c, g)) return true;
            return false;
        case PredNode::Kind::Intersect:
            for (auto& c : n.children)
                if (!pred_member(*c, g)) return false;
            return true;
        case PredNode::Kind::Diff:
            return pred_member(*n.base, g) &&
                   !std::binary_search(n.points.begin(), n.points.end(), g, prime_gen_less);
    }
    return false;
}

inline Infinitude pred_infinitude(const PredNode& n) {
    switch (n.kind) {
        case PredNode::Kind::Progression:
        case PredNode::Kind::DegreeProgression:
            return Infinitude::Infinite;
        case PredNode::Kind::Custom:
            return n.custom_infinite ? Infinitude::Infinite : Infinitude::Unknown;
        case PredNode::Kind::FiniteLeaf:
            return Infinitude::Finite;
        case PredNode::Kind::Union: {
            Infinitude acc = Infinitude::Finite;
            for (auto& c : n.children) {
                Infinitude ci = pred_infinitude(*c);
                if (ci == Infinitude::Infinite) return Infinitude::Infinite;
                if (ci == Infinitude::Unknown) acc = Infinitude::Unknown;
            }
            return acc;
        }
        case PredNode::Kind::Intersect:
            return Infinitude::Unknown;
        case PredNode::Kind::Diff:
            return pred_infinitude(*n.base);
    }
    return Infinitude::Unknown;
}

/// Explicit points of a predicate node whose infinitude is Finite.
inline std::vector<PrimeGen> pred_finite_points(const PredNode& n) {
    switch (n.kind) {
        case PredNode::Kind::FiniteLeaf:
            return n.points;
        case PredNode::Kind::Union: {
            std::vector<PrimeGen> out;
            for (auto& c : n.children)
                for (auto& g : pred_finite_points(*c)) out.push_back(g);
            return sorted_unique(std::move(out));
        }
        case PredNode::Kind::Diff: {
            std::vector<PrimeGen> out;
            for (auto& g : pred_finite_points(*n.base))
                if (!std::binary_search(n.points.begin(), n.points.end(), g, prime_gen_less))
                    out.push_back(g);
            return out;
        }
        default:
            throw Error("predicate is not known finite: " + std::string("pred_finite_points"));
    }
}

inline std::string pred_describe(const PredNode& n) {
    switch (n.kind) {
        case PredNode::Kind::Progression:
            return "progression(" + std::to_string(n.residue) + "," + std::to_string(n.modulus) + ")";
        case PredNode::Kind::DegreeProgression:
            return "progression(" + std::to_string(n.residue) + "," + std::to_string(n.modulus) + ")";
        case PredNode::Kind::Custom:
            return "custom:" + n.label;
        case PredNode::Kind::FiniteLeaf: {
            std::ostringstream os;
            os << "{";
            for (size_t i = 0; i < n.points.size(); ++i)
                os << (i ? "," : "") << prime_gen_str(n.points[i]);
            os << "}";
            return os.str();
        }
        case PredNode::Kind::Union:
        case PredNode::Kind::Intersect: {
            std::ostringstream os;
            os << (n.kind == PredNode::Kind::Union ? "union(" : "intersect(");
            for (size_t i = 0; i < n.children.size(); ++i)
                os << (i ? ";" : "") << pred_describe(*n.children[i]);
            os << ")";
            return os.str();
        }
        case PredNode::Kind::Diff: {
            std::ostringstream os;
            os << "diff(" << pred_describe(*n.base) << ";{";
            for (size_t i = 0; i < n.points.size(); ++i)
                os << (i ? "," : "") << prime_gen_str(n.points[i]);
            os << "})";
            return os.str();
        }
    }
    return "?";
}

namespace detail {

inline PredPtr make_progression_node(uint64_t a, uint64_t m) {
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::Progression;
    n->residue = a % m;
    n->modulus = m;
    return n;
}

inline PredPtr make_degree_progression_node(uint64_t a, uint64_t m) {
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::DegreeProgression;
    n->residue = a % m;
    n->modulus = m;
    return n;
}

inline PredPtr make_leaf_node(std::vector<PrimeGen> pts) {
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::FiniteLeaf;
    n->points = sorted_unique(std::move(pts));
    return n;
}

inline PredPtr make_diff_node(PredPtr base, std::vector<PrimeGen> removed) {
    if (base->kind == PredNode::Kind::Diff) {
        std::vector<PrimeGen> all = base->points;
        for (auto& g : removed) all.push_back(g);
        return make_diff_node(base->base, std::move(all));
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::Diff;
    n->base = std::move(base);
    n->points = sorted_unique(std::move(removed));
    if (n->points.empty()) return n->base;
    return n;
}

inline PredPtr make_union_node(std::vector<PredPtr> children) {
    std::vector<PredPtr> flat;
    std::vector<PrimeGen> leaf_points;
    for (auto& c : children) {
        if (c->kind == PredNode::Kind::Union) {
            for (auto& cc : c->children) flat.push_back(cc);
        } else if (c->kind == PredNode::Kind::FiniteLeaf) {
            for (auto& g : c->points) leaf_points.push_back(g);
        } else {
            flat.push_back(c);
        }
    }
    if (!leaf_points.empty()) flat.push_back(make_leaf_node(std::move(leaf_points)));
    std::sort(flat.begin(), flat.end(), [](const PredPtr& a, const PredPtr& b) {
        return pred_describe(*a) < pred_describe(*b);
    });
    flat.erase(std::unique(flat.begin(), flat.end(),
                           [](const PredPtr& a, const PredPtr& b) {
                               return pred_describe(*a) == pred_describe(*b);
                           }),
               flat.end());
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::Union;
    n->children = std::move(flat);
    return n;
}

inline PredPtr make_intersect_node(std::vector<PredPtr> children) {
    std::sort(children.begin(), children.end(), [](const PredPtr& a, const PredPtr& b) {
        return pred_describe(*a) < pred_describe(*b);
    });
    children.erase(std::unique(children.begin(), children.end(),
                               [](const PredPtr& a, const PredPtr& b) {
                                   return pred_describe(*a) == pred_describe(*b);
                               }),
                   children.end());
    if (children.size() == 1) return children[0];
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::Intersect;
    n->children = std::move(children);
    return n;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Subsets of the spectrum

struct FiniteSet {
    std::vector<PrimeGen> points; // sorted, unique
};

struct CofiniteSet {
    std::vector<PrimeGen> excluded; // sorted, unique
};

using ClosedPart = std::variant<FiniteSet, CofiniteSet, PredPtr>;

struct Finiteness {
    Infinitude kind;
    std::vector<PrimeGen> points; // populated when kind == Finite
};

/// A subset of Spec(R): a generic-point flag plus one of the closed-part
/// normal forms. Z/n subsets are always materialized as finite sets.
class SpectrumSubset {
public:
    static SpectrumSubset empty(const RingSpec& ring) {
        return SpectrumSubset(ring, false, FiniteSet{});
    }

    static SpectrumSubset all(const RingSpec& ring);

    static SpectrumSubset finite(const RingSpec& ring, std::vector<PrimeGen> pts,
                                 bool generic = false) {
        for (auto& g : pts)
            if (!is_canonical_prime(ring, g))
                throw Error("not a canonical prime of " + ring.to_string() + ": " +
                            prime_gen_str(g));
        if (generic && !ring.has_infinite_spectrum())
            throw Error("no generic point in " + ring.to_string());
        return SpectrumSubset(ring, generic, FiniteSet{sorted_unique(std::move(pts))});
    }

    static SpectrumSubset singleton(const PrimeIdeal& p) {
        if (p.is_generic()) return SpectrumSubset(p.ring(), true, FiniteSet{});
        return SpectrumSubset(p.ring(), false, FiniteSet{{p.generator()}});
    }

    static SpectrumSubset cofinite(const RingSpec& ring, std::vector<PrimeGen> excluded,
                                   bool generic);

    /// Arithmetic progression of closed primes: for Z the primes p = a (mod m);
    /// for GF(p)[x] the irreducibles with degree = a (mod m). Classes that are
    /// provably finite or cofinite are materialized as such.
    static SpectrumSubset progression(const RingSpec& ring, uint64_t a, uint64_t m,
                                      bool generic = false);

    static SpectrumSubset custom_predicate(const RingSpec& ring,
                                           std::function<bool(const PrimeGen&)> fn,
                                           std::string label, bool declared_infinite,
                                           std::optional<uint64_t> enum_bound = std::nullopt);

    static SpectrumSubset from_part(const RingSpec& ring, ClosedPart part, bool generic);

    const RingSpec& ring() const { return ring_; }
    bool includes_generic() const { return generic_; }
    const ClosedPart& part() const { return part_; }

    bool is_finite_form() const { return std::holds_alternative<FiniteSet>(part_); }
    bool is_cofinite_form() const { return std::holds_alternative<CofiniteSet>(part_); }
    bool is_predicate_form() const { return std::holds_alternative<PredPtr>(part_); }

    bool member_closed(const PrimeGen& g) const {
        if (auto* f = std::get_if<FiniteSet>(&part_))
            return std::binary_search(f->points.begin(), f->points.end(), g, prime_gen_less);
        if (auto* c = std::get_if<CofiniteSet>(&part_))
            return !std::binary_search(c->excluded.begin(), c->excluded.end(), g,
                                       prime_gen_less);
        return pred_member(*std::get<PredPtr>(part_), g);
    }

    bool member(const PrimeIdeal& p) const {
        require_same_ring(ring_, p.ring());
        if (p.is_generic()) return generic_;
        return member_closed(p.generator());
    }

    /// Finite / infinite / unknown classification of the closed part, with the
    /// explicit point list in the finite case.
    Finiteness classify_closed() const {
        if (auto* f = std::get_if<FiniteSet>(&part_))
            return {Infinitude::Finite, f->points};
        if (std::holds_alternative<CofiniteSet>(part_)) return {Infinitude::Infinite, {}};
        Infinitude k = pred_infinitude(*std::get<PredPtr>(part_));
        return {k, {}};
    }

    bool is_empty() const {
        if (generic_) return false;
        if (auto* f = std::get_if<FiniteSet>(&part_)) return f->points.empty();
        return false; // cofinite and declared-infinite parts are nonempty
    }

    std::string describe_part() const {
        if (auto* f = std::get_if<FiniteSet>(&part_)) {
            std::ostringstream os;
            os << "{";
            for (size_t i = 0; i < f->points.size(); ++i)
                os << (i ? "," : "") << prime_gen_str(f->points[i]);
            os << "}";
            return os.str();
        }
        if (auto* c = std::get_if<CofiniteSet>(&part_)) {
            std::ostringstream os;
            os << "cofinite~{";
            for (size_t i = 0; i < c->excluded.size(); ++i)
                os << (i ? "," : "") << prime_gen_str(c->excluded[i]);
            os << "}";
            return os.str();
        }
        return pred_describe(*std::get<PredPtr>(part_));
    }

    std::string to_string() const {
        return describe_part() + (generic_ ? "+generic" : "");
    }

    friend bool operator==(const SpectrumSubset& a, const SpectrumSubset& b) {
        if (a.ring_ != b.ring_ || a.generic_ != b.generic_) return false;
        if (a.part_.index() != b.part_.index())
            return a.describe_part() == b.describe_part();
        if (auto* f = std::get_if<FiniteSet>(&a.part_)) {
            auto& g = std::get<FiniteSet>(b.part_);
            return f->points.size() == g.points.size() &&
                   std::equal(f->points.begin(), f->points.end(), g.points.begin(),
                              prime_gen_eq);
        }
        if (auto* c = std::get_if<CofiniteSet>(&a.part_)) {
            auto& d = std::get<CofiniteSet>(b.part_);
            return c->excluded.size() == d.excluded.size() &&
                   std::equal(c->excluded.begin(), c->excluded.end(), d.excluded.begin(),
                              prime_gen_eq);
        }
        return a.describe_part() == b.describe_part();
    }
    friend bool operator!=(const SpectrumSubset& a, const SpectrumSubset& b) {
        return !(a == b);
    }

    json to_json() const;

private:
    SpectrumSubset(RingSpec ring, bool generic, ClosedPart part)
        : ring_(std::move(ring)), generic_(generic), part_(std::move(part)) {}

    friend SpectrumSubset unsafe_subset(const RingSpec&, bool, ClosedPart);

    RingSpec ring_;
    bool generic_;
    ClosedPart part_;
};

/// Internal factory bypassing prime validation (results of set algebra).
inline SpectrumSubset unsafe_subset(const RingSpec& ring, bool generic, ClosedPart part) {
    return SpectrumSubset(ring, generic, std::move(part));
}

// ---------------------------------------------------------------------------
// Enumeration of closed primes in canonical order

/// Canonical stream of closed primes: 2, 3, 5, ... for Z; monic irreducibles
/// by (degree, coefficients) for GF(p)[x]; the sorted finite list for Z/n.
class ClosedPrimeStream {
public:
    explicit ClosedPrimeStream(const RingSpec& ring) : ring_(ring), cursor_(1) {
        if (ring.kind() == RingKind::PolyOverPrimeField)
            poly_stream_.emplace(ring.field_char());
        if (ring.kind() == RingKind::Modular) {
            for (auto& [p, e] : factor_integer(ring.modulus())) {
                (void)e;
                finite_.push_back(p);
            }
        }
    }

    std::optional<PrimeGen> next() {
        switch (ring_.kind()) {
            case RingKind::Integers:
                while (true) {
                    ++cursor_;
                    if (is_prime(cursor_)) return PrimeGen(cursor_);
                }
            case RingKind::PolyOverPrimeField:
                return PrimeGen(poly_stream_->next());
            case RingKind::Modular:
                if (finite_index_ >= finite_.size()) return std::nullopt;
                return PrimeGen(finite_[finite_index_++]);
        }
        return std::nullopt;
    }

private:
    RingSpec ring_;
    Int cursor_;
    std::optional<IrreduciblePolyStream> poly_stream_;
    std::vector<Int> finite_;
    size_t finite_index_ = 0;
};

/// Sorted closed points of the finite spectrum Spec(Z/n).
inline std::vector<PrimeGen> modular_spectrum_points(const RingSpec& ring) {
    std::vector<PrimeGen> pts;
    for (auto& [p, e] : factor_integer(ring.modulus())) {
        (void)e;
        pts.emplace_back(p);
    }
    return pts;
}

inline SpectrumSubset SpectrumSubset::all(const RingSpec& ring) {
    if (ring.has_infinite_spectrum())
        return SpectrumSubset(ring, true, CofiniteSet{});
    return SpectrumSubset(ring, false, FiniteSet{modular_spectrum_points(ring)});
}

inline SpectrumSubset SpectrumSubset::cofinite(const RingSpec& ring,
                                               std::vector<PrimeGen> excluded, bool generic) {
    for (auto& g : excluded)
        if (!is_canonical_prime(ring, g))
            throw Error("not a canonical prime of " + ring.to_string() + ": " +
                        prime_gen_str(g));
    if (!ring.has_infinite_spectrum()) {
        auto pts = modular_spectrum_points(ring);
        auto excl = sorted_unique(std::move(excluded));
        std::vector<PrimeGen> kept;
        for (auto& g : pts)
            if (!std::binary_search(excl.begin(), excl.end(), g, prime_gen_less))
                kept.push_back(g);
        if (generic) throw Error("no generic point in " + ring.to_string());
        return SpectrumSubset(ring, false, FiniteSet{std::move(kept)});
    }
    return SpectrumSubset(ring, generic, CofiniteSet{sorted_unique(std::move(excluded))});
}

inline SpectrumSubset SpectrumSubset::progression(const RingSpec& ring, uint64_t a, uint64_t m,
                                                  bool generic) {
    if (m == 0) throw Error("progression modulus must be positive");
    a %= m;
    switch (ring.kind()) {
        case RingKind::Integers: {
            if (m == 1) return SpectrumSubset(ring, generic, CofiniteSet{});
            uint64_t g = std::gcd(a, m);
            if (g > 1 || a == 0) {
                // Only a prime equal to gcd(a, m) can satisfy p = a (mod m).
                std::vector<PrimeGen> pts;
                Int cand(a == 0 ? m : g);
                if (is_prime(cand) && mod_nonneg(cand - Int(a), Int(m)) == 0)
                    pts.emplace_back(cand);
                return SpectrumSubset(ring, generic, FiniteSet{std::move(pts)});
            }
            if (m == 2) {
                // Odd primes: cofinite.
                return SpectrumSubset(ring, generic, CofiniteSet{{Int(2)}});
            }
            return SpectrumSubset(ring, generic, detail::make_progression_node(a, m));
        }
        case RingKind::PolyOverPrimeField: {
            if (m == 1) return SpectrumSubset(ring, generic, CofiniteSet{});
            return SpectrumSubset(ring, generic, detail::make_degree_progression_node(a, m));
        }
        case RingKind::Modular:
            throw Error("progressions are not defined over the finite spectrum of " +
                        ring.to_string());
    }
    throw Error("unreachable");
}

inline SpectrumSubset SpectrumSubset::custom_predicate(
    const RingSpec& ring, std::function<bool(const PrimeGen&)> fn, std::string label,
    bool declared_infinite, std::optional<uint64_t> enum_bound) {
    if (!ring.has_infinite_spectrum()) {
        std::vector<PrimeGen> pts;
        for (auto& g : modular_spectrum_points(ring))
            if (fn(g)) pts.push_back(g);
        return SpectrumSubset(ring, false, FiniteSet{std::move(pts)});
    }
    if (!declared_infinite && enum_bound) {
        // The bound promises all members occur among the first enum_bound
        // closed primes in canonical order.
        std::vector<PrimeGen> pts;
        ClosedPrimeStream stream(ring);
        for (uint64_t i = 0; i < *enum_bound; ++i) {
            auto g = stream.next();
            if (!g) break;
            if (fn(*g)) pts.push_back(*g);
        }
        return SpectrumSubset(ring, false, FiniteSet{sorted_unique(std::move(pts))});
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredNode::Kind::Custom;
    n->fn = std::move(fn);
    n->custom_infinite = declared_infinite;
    n->label = std::move(label);
    return SpectrumSubset(ring, false, PredPtr(n));
}

inline SpectrumSubset SpectrumSubset::from_part(const RingSpec& ring, ClosedPart part,
                                                bool generic) {
    if (!ring.has_infinite_spectrum()) {
        if (generic) throw Error("no generic point in " + ring.to_string());
        if (auto* f = std::get_if<FiniteSet>(&part))
            return SpectrumSubset(ring, false, std::move(*f));
        std::vector<PrimeGen> pts;
        for (auto& g : modular_spectrum_points(ring)) {
            bool in = std::holds_alternative<CofiniteSet>(part)
                          ? !std::binary_search(std::get<CofiniteSet>(part).excluded.begin(),
                                                std::get<CofiniteSet>(part).excluded.end(), g,
                                                prime_gen_less)
                          : pred_member(*std::get<PredPtr>(part), g);
            if (in) pts.push_back(g);
        }
        return SpectrumSubset(ring, false, FiniteSet{std::move(pts)});
    }
    if (auto* p = std::get_if<PredPtr>(&part)) {
        if (pred_infinitude(**p) == Infinitude::Finite)
            return SpectrumSubset(ring, generic, FiniteSet{pred_finite_points(**p)});
    }
    return SpectrumSubset(ring, generic, std::move(part));
}

// ---------------------------------------------------------------------------
// Set algebra on closed parts

namespace detail {

ClosedPart part_intersect(const RingSpec& ring, const ClosedPart& a, const ClosedPart& b);
ClosedPart part_union(const RingSpec& ring, const ClosedPart& a, const ClosedPart& b);
ClosedPart part_complement(const RingSpec& ring, const ClosedPart& a);

inline std::string part_describe(const ClosedPart& p) {
    if (auto* f = std::get_if<FiniteSet>(&p)) {
        std::ostringstream os;
        os << "F{";
        for (auto& g : f->points) os << prime_gen_str(g) << ",";
        os << "}";
        return os.str();
    }
    if (auto* c = std::get_if<CofiniteSet>(&p)) {
        std::ostringstream os;
        os << "C{";
        for (auto& g : c->excluded) os << prime_gen_str(g) << ",";
        os << "}";
        return os.str();
    }
    return "P:" + pred_describe(*std::get<PredPtr>(p));
}

/// Remove an explicit finite list of points.
inline ClosedPart part_remove_points(const ClosedPart& a, const std::vector<PrimeGen>& pts) {
    if (pts.empty()) return a;
    auto sorted = sorted_unique(pts);
    if (auto* f = std::get_if<FiniteSet>(&a)) {
        std::vector<PrimeGen> kept;
        for (auto& g : f->points)
            if (!std::binary_search(sorted.begin(), sorted.end(), g, prime_gen_less))
                kept.push_back(g);
        return FiniteSet{std::move(kept)};
    }
    if (auto* c = std::get_if<CofiniteSet>(&a)) {
        std::vector<PrimeGen> excl = c->excluded;
        for (auto& g : sorted) excl.push_back(g);
        return CofiniteSet{sorted_unique(std::move(excl))};
    }
    return make_diff_node(std::get<PredPtr>(a), sorted);
}

inline std::vector<PrimeGen> filter_points(const std::vector<PrimeGen>& pts,
                                           const std::function<bool(const PrimeGen&)>& keep) {
    std::vector<PrimeGen> out;
    for (auto& g : pts)
        if (keep(g)) out.push_back(g);
    return out;
}

/// Structural intersection of two predicate nodes; may collapse to a finite
/// set (incompatible progressions) or fall back to an Intersect node of
/// unknown infinitude.
inline ClosedPart pred_intersect_nodes(const RingSpec& ring, const PredPtr& a,
                                       const PredPtr& b) {
    if (pred_describe(*a) == pred_describe(*b)) return a;
    auto is_prog = [](const PredNode& n) {
        return n.kind == PredNode::Kind::Progression ||
               n.kind == PredNode::Kind::DegreeProgression;
    };
    if (a->kind == PredNode::Kind::FiniteLeaf)
        return FiniteSet{filter_points(a->points,
                                       [&](const PrimeGen& g) { return pred_member(*b, g); })};
    if (b->kind == PredNode::Kind::FiniteLeaf)
        return pred_intersect_nodes(ring, b, a);
    if (a->kind == PredNode::Kind::Diff)
        return part_remove_points(pred_intersect_nodes(ring, a->base, b), a->points);
    if (b->kind == PredNode::Kind::Diff)
        return part_remove_points(pred_intersect_nodes(ring, a, b->base), b->points);
    if (is_prog(*a) && is_prog(*b) && a->kind == b->kind) {
        // CRT merge of two progressions.
        uint64_t m1 = a->modulus, m2 = b->modulus;
        uint64_t r1 = a->residue, r2 = b->residue;
        uint64_t g = std::gcd(m1, m2);
        if ((r1 % g) != (r2 % g)) return FiniteSet{};
        Int lcm = Int(m1) / g * m2;
        // x = r1 + m1*t with m1*t = (r2 - r1) mod m2.
        Int step(m1), target = mod_nonneg(Int(r2) - Int(r1), Int(m2));
        Int t = mod_nonneg(invmod(step / g, Int(m2) / g) * (target / g), Int(m2) / g);
        uint64_t c = static_cast<uint64_t>(mod_nonneg(Int(r1) + step * t, lcm));
        uint64_t l = static_cast<uint64_t>(lcm);
        if (a->kind == PredNode::Kind::Progression)
            return PredPtr(make_progression_node(c, l));
        return PredPtr(make_degree_progression_node(c, l));
    }
    if (a->kind == PredNode::Kind::Union || b->kind == PredNode::Kind::Union) {
        const PredPtr& u = a->kind == PredNode::Kind::Union ? a : b;
        const PredPtr& other = a->kind == PredNode::Kind::Union ? b : a;
        ClosedPart acc = FiniteSet{};
        for (auto& c : u->children)
            acc = part_union(ring, acc, pred_intersect_nodes(ring, c, other));
        return acc;
    }
    return PredPtr(make_intersect_node({a, b}));
}

inline ClosedPart part_intersect(const RingSpec& ring, const ClosedPart& a,
                                 const ClosedPart& b) {
    if (std::holds_alternative<FiniteSet>(a)) {
        auto& f = std::get<FiniteSet>(a);
        if (auto* g = std::get_if<FiniteSet>(&b)) {
            std::vector<PrimeGen> out;
            std::set_intersection(f.points.begin(), f.points.end(), g->points.begin(),
                                  g->points.end(), std::back_inserter(out), prime_gen_less);
            return FiniteSet{std::move(out)};
        }
        if (auto* c = std::get_if<CofiniteSet>(&b)) {
            return FiniteSet{filter_points(f.points, [&](const PrimeGen& g) {
                return !std::binary_search(c->excluded.begin(), c->excluded.end(), g,
                                           prime_gen_less);
            })};
        }
        auto& p = std::get<PredPtr>(b);
        return FiniteSet{
            filter_points(f.points, [&](const PrimeGen& g) { return pred_member(*p, g); })};
    }
    if (std::holds_alternative<FiniteSet>(b)) return part_intersect(ring, b, a);

    if (std::holds_alternative<CofiniteSet>(a)) {
        auto& c = std::get<CofiniteSet>(a);
        if (auto* d = std::get_if<CofiniteSet>(&b)) {
            std::vector<PrimeGen> excl = c.excluded;
            for (auto& g : d->excluded) excl.push_back(g);
            return CofiniteSet{sorted_unique(std::move(excl))};
        }
        return part_remove_points(b, c.excluded);
    }
    if (std::holds_alternative<CofiniteSet>(b)) return part_intersect(ring, b, a);

    return pred_intersect_nodes(ring, std::get<PredPtr>(a), std::get<PredPtr>(b));
}

inline ClosedPart part_union(const RingSpec& ring, const ClosedPart& a, const ClosedPart& b) {
    if (std::holds_alternative<FiniteSet>(a)) {
        auto& f = std::get<FiniteSet>(a);
        if (f.points.empty()) return b;
        if (auto* g = std::get_if<FiniteSet>(&b)) {
            std::vector<PrimeGen> out = f.points;
            for (auto& x : g->points) out.push_back(x);
            return FiniteSet{sorted_unique(std::move(out))};
        }
        if (auto* c = std::get_if<CofiniteSet>(&b)) {
            return CofiniteSet{filter_points(c->excluded, [&](const PrimeGen& g) {
                return !std::binary_search(f.points.begin(), f.points.end(), g,
                                           prime_gen_less);
            })};
        }
        auto& p = std::get<PredPtr>(b);
        std::vector<PrimeGen> extra =
            filter_points(f.points, [&](const PrimeGen& g) { return !pred_member(*p, g); });
        if (extra.empty()) return p;
        return PredPtr(make_union_node({p, make_leaf_node(std::move(extra))}));
    }
    if (std::holds_alternative<FiniteSet>(b)) return part_union(ring, b, a);

    if (std::holds_alternative<CofiniteSet>(a)) {
        auto& c = std::get<CofiniteSet>(a);
        if (auto* d = std::get_if<CofiniteSet>(&b)) {
            std::vector<PrimeGen> out;
            std::set_intersection(c.excluded.begin(), c.excluded.end(), d->excluded.begin(),
                                  d->excluded.end(), std::back_inserter(out), prime_gen_less);
            return CofiniteSet{std::move(out)};
        }
        auto& p = std::get<PredPtr>(b);
        return CofiniteSet{filter_points(
            c.excluded, [&](const PrimeGen& g) { return !pred_member(*p, g); })};
    }
    if (std::holds_alternative<CofiniteSet>(b)) return part_union(ring, b, a);

    return PredPtr(make_union_node({std::get<PredPtr>(a), std::get<PredPtr>(b)}));
}

/// Complement within the set of all closed points.
inline ClosedPart pred_complement_node(const RingSpec& ring, const PredPtr& n) {
    switch (n->kind) {
        case PredNode::Kind::Progression: {
            std::vector<PredPtr> others;
            for (uint64_t b = 1; b < n->modulus; ++b) {
                if (b == n->residue || std::gcd(b, n->modulus) != 1) continue;
                others.push_back(make_progression_node(b, n->modulus));
            }
            std::vector<PrimeGen> divisors;
            for (auto& [p, e] : factor_integer(Int(n->modulus))) {
                (void)e;
                if (mod_nonneg(p - Int(n->residue), Int(n->modulus)) != 0)
                    divisors.emplace_back(p);
            }
            if (others.empty()) return FiniteSet{sorted_unique(std::move(divisors))};
            if (!divisors.empty()) others.push_back(make_leaf_node(std::move(divisors)));
            return PredPtr(make_union_node(std::move(others)));
        }
        case PredNode::Kind::DegreeProgression: {
            std::vector<PredPtr> others;
            for (uint64_t b = 0; b < n->modulus; ++b) {
                if (b == n->residue) continue;
                others.push_back(make_degree_progression_node(b, n->modulus));
            }
            if (others.empty()) return FiniteSet{};
            return PredPtr(make_union_node(std::move(others)));
        }
        case PredNode::Kind::FiniteLeaf:
            return CofiniteSet{n->points};
        case PredNode::Kind::Union: {
            ClosedPart acc = CofiniteSet{};
            for (auto& c : n->children)
                acc = part_intersect(ring, acc, pred_complement_node(ring, c));
            return acc;
        }
        case PredNode::Kind::Intersect: {
            ClosedPart acc = FiniteSet{};
            for (auto& c : n->children)
                acc = part_union(ring, acc, pred_complement_node(ring, c));
            return acc;
        }
        case PredNode::Kind::Diff: {
            ClosedPart comp = pred_complement_node(ring, n->base);
            return part_union(ring, comp, ClosedPart(FiniteSet{n->points}));
        }
        case PredNode::Kind::Custom: {
            auto out = std::make_shared<PredNode>();
            out->kind = PredNode::Kind::Custom;
            auto inner = n->fn;
            out->fn = [inner](const PrimeGen& g) { return !inner(g); };
            out->custom_infinite = false;
            out->label = "not(" + n->label + ")";
            return PredPtr(out);
        }
    }
    return FiniteSet{};
}

inline ClosedPart part_complement(const RingSpec& ring, const ClosedPart& a) {
    if (auto* f = std::get_if<FiniteSet>(&a)) return CofiniteSet{f->points};
    if (auto* c = std::get_if<CofiniteSet>(&a)) return FiniteSet{c->excluded};
    return pred_complement_node(ring, std::get<PredPtr>(a));
}

} // namespace detail

inline SpectrumSubset unite(const SpectrumSubset& a, const SpectrumSubset& b) {
    require_same_ring(a.ring(), b.ring());
    return SpectrumSubset::from_part(a.ring(),
                                     detail::part_union(a.ring(), a.part(), b.part()),
                                     a.includes_generic() || b.includes_generic());
}

inline SpectrumSubset intersect(const SpectrumSubset& a, const SpectrumSubset& b) {
    require_same_ring(a.ring(), b.ring());
    return SpectrumSubset::from_part(a.ring(),
                                     detail::part_intersect(a.ring(), a.part(), b.part()),
                                     a.includes_generic() && b.includes_generic());
}

/// Complement relative to the full spectrum.
inline SpectrumSubset complement(const SpectrumSubset& a) {
    bool generic =
        a.ring().has_infinite_spectrum() ? !a.includes_generic() : false;
    return SpectrumSubset::from_part(a.ring(), detail::part_complement(a.ring(), a.part()),
                                     generic);
}

inline SpectrumSubset difference(const SpectrumSubset& a, const SpectrumSubset& b) {
    return intersect(a, complement(b));
}

/// a minus an explicit finite list of closed points (never touches the
/// generic flag).
inline SpectrumSubset remove_closed_points(const SpectrumSubset& a,
                                           const std::vector<PrimeGen>& pts) {
    return SpectrumSubset::from_part(a.ring(), detail::part_remove_points(a.part(), pts),
                                     a.includes_generic());
}

/// Decidable subset relation; nullopt when the representations cannot decide.
inline std::optional<bool> subset_of(const SpectrumSubset& a, const SpectrumSubset& b) {
    require_same_ring(a.ring(), b.ring());
    if (a.includes_generic() && !b.includes_generic()) return false;
    auto fa = a.classify_closed();
    if (fa.kind == Infinitude::Finite) {
        for (auto& g : fa.points)
            if (!b.member_closed(g)) return false;
        return true;
    }
    if (b.is_cofinite_form()) {
        // a avoids the finitely many exclusions of b.
        for (auto& e : std::get<CofiniteSet>(b.part()).excluded)
            if (a.member_closed(e)) return false;
        return true;
    }
    auto fb = b.classify_closed();
    if (fb.kind == Infinitude::Finite)
        return fa.kind == Infinitude::Infinite ? std::optional<bool>(false) : std::nullopt;
    if (a.describe_part() == b.describe_part()) return true;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Spectrum operations

struct SpectrumEnumeration {
    SpectrumSubset full;
    std::optional<std::vector<PrimeIdeal>> points; // explicit list for finite spectra
};

inline SpectrumEnumeration spec_enumerate(const RingSpec& ring) {
    SpectrumEnumeration out{SpectrumSubset::all(ring), std::nullopt};
    if (!ring.has_infinite_spectrum()) {
        std::vector<PrimeIdeal> pts;
        for (auto& g : modular_spectrum_points(ring)) pts.push_back(PrimeIdeal::closed(ring, g));
        out.points = std::move(pts);
    }
    return out;
}

/// V(I) = { P : I <= P }.
inline SpectrumSubset v_of(const Ideal& ideal) {
    const RingSpec& ring = ideal.ring();
    const RingElement& g = ideal.generator();
    if (g.is_zero()) return SpectrumSubset::all(ring);
    if (is_unit(g)) return SpectrumSubset::empty(ring);
    std::vector<PrimeGen> pts;
    for (auto& [p, e] : factor(g).factors) {
        (void)e;
        if (ring.kind() == RingKind::PolyOverPrimeField)
            pts.emplace_back(p.as_poly());
        else
            pts.emplace_back(p.as_int());
    }
    return SpectrumSubset::finite(ring, std::move(pts), false);
}

inline SpectrumSubset v_of(const RingElement& a) { return v_of(Ideal::principal(a)); }

/// D(a) = Spec(R) minus V(a).
inline SpectrumSubset d_of(const RingElement& a) { return complement(v_of(a)); }

/// Smallest Zariski-closed superset. Any set with the generic point, and any
/// set with infinitely many closed points, closes to the full spectrum.
inline SpectrumSubset zariski_closure(const SpectrumSubset& s) {
    const RingSpec& ring = s.ring();
    if (!ring.has_infinite_spectrum()) return s;
    if (s.includes_generic()) return SpectrumSubset::all(ring);
    auto f = s.classify_closed();
    switch (f.kind) {
        case Infinitude::Finite:
            return unsafe_subset(ring, false, FiniteSet{f.points});
        case Infinitude::Infinite:
            return SpectrumSubset::all(ring);
        case Infinitude::Unknown:
            throw UnknownInfinitudeError(
                "zariski_closure(" + s.to_string() +
                "): the set's infinitude was neither declared nor enumerable");
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Set grammar and JSON

inline json SpectrumSubset::to_json() const {
    json j;
    if (auto* f = std::get_if<FiniteSet>(&part_)) {
        json arr = json::array();
        for (auto& g : f->points) arr.push_back(prime_gen_str(g));
        j["finite"] = arr;
        if (generic_) j["generic"] = true;
        return j;
    }
    if (auto* c = std::get_if<CofiniteSet>(&part_)) {
        json arr = json::array();
        for (auto& g : c->excluded) arr.push_back(prime_gen_str(g));
        j["cofinite_excluding"] = arr;
        j["generic"] = generic_;
        return j;
    }
    j["predicate"] = pred_describe(*std::get<PredPtr>(part_));
    j["declared_infinite"] = pred_infinitude(*std::get<PredPtr>(part_)) == Infinitude::Infinite;
    j["generic"] = generic_;
    return j;
}

inline PrimeGen parse_prime_gen(const RingSpec& ring, const std::string& text) {
    PrimeGen g = ring.kind() == RingKind::PolyOverPrimeField
                     ? PrimeGen(pf_parse(ring.field_char(), text))
                     : PrimeGen(Int(text));
    if (!is_canonical_prime(ring, g))
        throw Error("not a canonical prime of " + ring.to_string() + ": " + text);
    return g;
}

/// Set grammar: "{2,3,5}", "cofinite~{2,3}", "progression(1,4)", "all",
/// optional "+generic" suffix, plus "V(<elt>)" and "D(<elt>)".
inline SpectrumSubset parse_set(const RingSpec& ring, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    bool generic = false;
    constexpr const char* suffix = "+generic";
    if (s.size() >= 8 && s.substr(s.size() - 8) == suffix) {
        generic = true;
        s = s.substr(0, s.size() - 8);
    }
    auto parse_gen_list = [&](const std::string& body) {
        std::vector<PrimeGen> gens;
        size_t pos = 0;
        while (pos < body.size()) {
            size_t comma = body.find(',', pos);
            if (comma == std::string::npos) comma = body.size();
            std::string item = body.substr(pos, comma - pos);
            if (!item.empty()) gens.push_back(parse_prime_gen(ring, item));
            pos = comma + 1;
        }
        return gens;
    };
    if (s == "all") {
        if (generic) throw Error("'all' already includes the generic point");
        return SpectrumSubset::all(ring);
    }
    if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
        return SpectrumSubset::finite(ring, parse_gen_list(s.substr(1, s.size() - 2)), generic);
    }
    if (s.rfind("cofinite~{", 0) == 0 && s.back() == '}') {
        return SpectrumSubset::cofinite(ring, parse_gen_list(s.substr(10, s.size() - 11)),
                                        generic);
    }
    if (s.rfind("progression(", 0) == 0 && s.back() == ')') {
        std::string body = s.substr(12, s.size() - 13);
        size_t comma = body.find(',');
        if (comma == std::string::npos)
            throw Error("progression expects two arguments: " + text);
        uint64_t a = std::stoull(body.substr(0, comma));
        uint64_t m = std::stoull(body.substr(comma + 1));
        return SpectrumSubset::progression(ring, a, m, generic);
    }
    if (s.rfind("V(", 0) == 0 && s.back() == ')') {
        auto v = v_of(parse_element(ring, s.substr(2, s.size() - 3)));
        return generic ? unite(v, unsafe_subset(ring, true, FiniteSet{})) : v;
    }
    if (s.rfind("D(", 0) == 0 && s.back() == ')') {
        auto d = d_of(parse_element(ring, s.substr(2, s.size() - 3)));
        return generic ? unite(d, unsafe_subset(ring, true, FiniteSet{})) : d;
    }
    throw Error("unknown set literal: " + text);
}

} // namespace spectopo
