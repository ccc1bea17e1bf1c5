#pragma once

// The Boolean algebra of constructible subsets of Spec(R), patch closure and
// patch-membership decisions, and finite Boolean subalgebras (atoms).

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spectopo/spectrum.hpp"

namespace spectopo {

/// A constructible set in normal form: a finite set of closed points, or a
/// cofinite set of closed points with or without the generic point (the form
/// without the generic point arises only as a trace on a generic-free
/// carrier). Over Z/n, any subset of the finite spectrum.
class ConstructibleSet {
public:
    explicit ConstructibleSet(SpectrumSubset s) : s_(std::move(s)) {
        if (s_.is_predicate_form())
            throw Error("predicate-backed set is not constructible: " + s_.to_string());
        if (s_.includes_generic() && !s_.is_cofinite_form())
            throw Error("a constructible set containing the generic point contains a "
                        "cofinite set of closed points; got " +
                        s_.to_string());
    }

    const SpectrumSubset& subset() const { return s_; }
    const RingSpec& ring() const { return s_.ring(); }
    std::string to_string() const { return s_.to_string(); }
    json to_json() const { return s_.to_json(); }

    friend bool operator==(const ConstructibleSet& a, const ConstructibleSet& b) {
        return a.s_ == b.s_;
    }
    friend bool operator!=(const ConstructibleSet& a, const ConstructibleSet& b) {
        return !(a == b);
    }

private:
    SpectrumSubset s_;
};

inline ConstructibleSet set_union(const ConstructibleSet& a, const ConstructibleSet& b) {
    return ConstructibleSet(unite(a.subset(), b.subset()));
}

inline ConstructibleSet set_intersect(const ConstructibleSet& a, const ConstructibleSet& b) {
    return ConstructibleSet(intersect(a.subset(), b.subset()));
}

/// Complement relative to the full spectrum. The trace form "cofinite without
/// the generic point" has no constructible global complement and is refused.
inline ConstructibleSet set_complement(const ConstructibleSet& a) {
    if (a.ring().has_infinite_spectrum() && a.subset().is_cofinite_form() &&
        !a.subset().includes_generic())
        throw Error("complement of a cofinite set without the generic point is not "
                    "constructible in Spec(" +
                    a.ring().to_string() + ")");
    return ConstructibleSet(complement(a.subset()));
}

enum class BoolOp { Union, Intersect, Complement };

inline ConstructibleSet boolean_op(BoolOp op, const ConstructibleSet& a,
                                   const ConstructibleSet* b = nullptr) {
    switch (op) {
        case BoolOp::Union:
            if (!b) throw PreconditionError("union needs two operands");
            return set_union(a, *b);
        case BoolOp::Intersect:
            if (!b) throw PreconditionError("intersect needs two operands");
            return set_intersect(a, *b);
        case BoolOp::Complement:
            return set_complement(a);
    }
    throw Error("unreachable");
}

/// D(a) intersected with V(I), in normal form.
inline ConstructibleSet basic_constructible(const RingElement& a, const Ideal& ideal) {
    require_same_ring(a.ring(), ideal.ring());
    return ConstructibleSet(intersect(d_of(a), v_of(ideal)));
}

// ---------------------------------------------------------------------------
// Patch topology

/// Patch closure: finite sets are closed; a set with infinitely many closed
/// points acquires the generic point; finite spectra are patch-discrete.
/// Predicate sets of undeclared infinitude are refused.
inline SpectrumSubset patch_closure(const SpectrumSubset& s) {
    if (!s.ring().has_infinite_spectrum()) return s;
    auto cls = s.classify_closed();
    switch (cls.kind) {
        case Infinitude::Finite:
            return s;
        case Infinitude::Infinite:
            return SpectrumSubset::from_part(s.ring(), s.part(), true);
        case Infinitude::Unknown:
            throw UnknownInfinitudeError(
                "patch_closure(" + s.to_string() +
                "): infinitude of the set was neither declared nor enumerable");
    }
    throw Error("unreachable");
}

inline bool is_patch_closed(const SpectrumSubset& s) { return patch_closure(s) == s; }

/// Pointwise patch-closure membership, decided by a case analysis over basic
/// neighborhoods of the point; negative answers are certified by an explicit
/// constructible neighborhood computed to miss the set. Serves as an
/// independent oracle for patch_closure.
inline bool patch_membership(const PrimeIdeal& pt, const SpectrumSubset& s) {
    require_same_ring(pt.ring(), s.ring());
    const RingSpec& ring = s.ring();
    auto cls = s.classify_closed();
    if (cls.kind == Infinitude::Unknown)
        throw UnknownInfinitudeError("patch_membership: infinitude of " + s.to_string() +
                                     " was neither declared nor enumerable");
    if (!pt.is_generic()) {
        // Every basic neighborhood of a closed point includes the point, so
        // membership in S settles the positive case; otherwise V(g) = {pt}
        // is a neighborhood, verified disjoint from S.
        if (s.member(pt)) return true;
        SpectrumSubset nbhd = SpectrumSubset::singleton(pt);
        if (!intersect(nbhd, s).is_empty())
            throw Error("patch_membership: inconsistent singleton neighborhood");
        return false;
    }
    if (s.includes_generic()) return true;
    if (cls.kind == Infinitude::Infinite) {
        // Any constructible neighborhood of the generic point excludes only
        // finitely many closed points, so it meets the infinite set S.
        // Spot-verify on concrete neighborhoods built from stream primes.
        ClosedPrimeStream stream(ring);
        std::vector<PrimeGen> excl;
        for (int i = 0; i < 5; ++i) {
            auto g = stream.next();
            if (!g) break;
            excl.push_back(*g);
            SpectrumSubset nbhd = SpectrumSubset::cofinite(ring, excl, true);
            auto trace = intersect(nbhd, s);
            if (trace.classify_closed().kind != Infinitude::Infinite)
                throw Error("patch_membership: cofinite neighborhood unexpectedly "
                            "missed an infinite set");
        }
        return true;
    }
    // S finite without the generic point: the cofinite neighborhood excluding
    // exactly S misses S.
    SpectrumSubset nbhd = SpectrumSubset::cofinite(ring, cls.points, true);
    if (!intersect(nbhd, s).is_empty())
        throw Error("patch_membership: witness neighborhood failed to miss the set");
    return false;
}

// ---------------------------------------------------------------------------
// Finite Boolean subalgebras

struct AlgebraAtom {
    SpectrumSubset trace;
    uint32_t pattern;       // bit i set <=> inside generators[i]
    Infinitude finiteness;  // derived from the trace's normal form
    std::string description;

    bool is_infinite() const { return finiteness == Infinitude::Infinite; }
};

/// The finite Boolean algebra of subsets of a carrier generated by finitely
/// many traces; atoms partition the carrier and every generator is a union of
/// atoms.
class FiniteBooleanAlgebra {
public:
    static FiniteBooleanAlgebra generate(const SpectrumSubset& carrier,
                                         std::vector<SpectrumSubset> generators) {
        if (generators.size() > 20)
            throw BoundError("boolean subalgebra limited to 20 generators");
        for (auto& g : generators) require_same_ring(carrier.ring(), g.ring());
        FiniteBooleanAlgebra out(carrier, std::move(generators));
        const size_t k = out.generators_.size();
        for (uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
            SpectrumSubset t = carrier;
            for (size_t i = 0; i < k; ++i) {
                t = (pattern >> i) & 1 ? intersect(t, out.generators_[i])
                                       : difference(t, out.generators_[i]);
            }
            if (t.is_empty()) continue;
            auto cls = t.classify_closed();
            if (cls.kind == Infinitude::Finite && cls.points.empty() &&
                !t.includes_generic())
                continue;
            out.atoms_.push_back(AlgebraAtom{t, pattern, cls.kind, t.to_string()});
        }
        std::sort(out.atoms_.begin(), out.atoms_.end(),
                  [](const AlgebraAtom& a, const AlgebraAtom& b) {
                      bool fa = a.finiteness == Infinitude::Finite;
                      bool fb = b.finiteness == Infinitude::Finite;
                      if (fa != fb) return fa; // finite atoms first, by smallest point
                      return a.description < b.description;
                  });
        return out;
    }

    const SpectrumSubset& carrier() const { return carrier_; }
    const std::vector<SpectrumSubset>& generators() const { return generators_; }
    const std::vector<AlgebraAtom>& atoms() const { return atoms_; }

    /// Union of the atoms selected by the bitmask.
    SpectrumSubset union_of(uint64_t atom_mask) const {
        SpectrumSubset acc = SpectrumSubset::empty(carrier_.ring());
        for (size_t i = 0; i < atoms_.size(); ++i) {
            if ((atom_mask >> i) & 1) acc = unite(acc, atoms_[i].trace);
        }
        return acc;
    }

private:
    FiniteBooleanAlgebra(SpectrumSubset carrier, std::vector<SpectrumSubset> gens)
        : carrier_(std::move(carrier)), generators_(std::move(gens)) {}

    SpectrumSubset carrier_;
    std::vector<SpectrumSubset> generators_;
    std::vector<AlgebraAtom> atoms_;
};

/// Atoms of the algebra generated on C by the traces of constructible sets.
inline FiniteBooleanAlgebra boolean_subalgebra(const SpectrumSubset& carrier,
                                               const std::vector<ConstructibleSet>& gens) {
    if (carrier.is_predicate_form() &&
        carrier.classify_closed().kind == Infinitude::Unknown)
        throw UnknownInfinitudeError(
            "boolean_subalgebra: carrier infinitude was neither declared nor enumerable");
    std::vector<SpectrumSubset> subsets;
    subsets.reserve(gens.size());
    for (auto& g : gens) subsets.push_back(g.subset());
    return FiniteBooleanAlgebra::generate(carrier, std::move(subsets));
}

} // namespace spectopo
