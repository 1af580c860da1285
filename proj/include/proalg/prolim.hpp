#pragma once

// N-indexed projective towers of variety models and inductive-limit
// functions on them.
//
// A tower stores level 0 and grows on demand: bond(n) is a morphism model
// from level(n+1) to level(n).  Materialized levels are cached write-once
// behind a mutex, so concurrent readers observe identical models.  An
// IndFunction is a representative (level, value) together with the
// transition system used to lift it; two representatives are equivalent
// when they agree after lifting to a common level.
//
// The pro-characteristic of a stable representative at level n is the
// fraction char(value) / step(0)*...*step(n-1) over the multiplier
// system's denominator set.

#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "proalg/relgroth.hpp"
#include "proalg/variety.hpp"

namespace proalg {

enum class CharKind { euler, gamma };

// Projective system of nonzero ring elements generated by per-step
// multipliers: p_{nm} = step(n)*...*step(m-1).  A system either lists
// finitely many steps or repeats its last step forever.
class MultiplierSystem {
public:
    explicit MultiplierSystem(std::vector<Polynomial> steps, bool repeat_last = false);
    static MultiplierSystem constant(Polynomial step);

    const Polynomial& step(int n) const;
    Polynomial product(int n, int m) const;  // p_{nm} for n <= m
    const std::vector<Polynomial>& steps() const { return steps_; }
    bool repeats() const { return repeat_last_; }
    bool integer_steps() const;

    // distinct steps, in order of first appearance
    const DenominatorSetPtr& denominators() const { return dens_; }

    bool operator==(const MultiplierSystem& o) const {
        return steps_ == o.steps_ && repeat_last_ == o.repeat_last_;
    }

private:
    std::vector<Polynomial> steps_;
    bool repeat_last_;
    DenominatorSetPtr dens_;
};

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

class Tower {
public:
    // given level(n), constructs level(n+1) and returns bond(n); the
    // returned morphism's target must be the passed level
    using Grower = std::function<MorphismModelPtr(const VarietyModelPtr&, int)>;

    static TowerPtr from_levels(std::string name, std::vector<VarietyModelPtr> levels,
                                std::vector<MorphismModelPtr> bonds,
                                std::optional<MultiplierSystem> chi_steps = std::nullopt,
                                std::optional<MultiplierSystem> gamma_steps = std::nullopt);
    static TowerPtr generated(std::string name, VarietyModelPtr level0, Grower grow,
                              std::optional<MultiplierSystem> chi_steps = std::nullopt,
                              std::optional<MultiplierSystem> gamma_steps = std::nullopt);

    const std::string& name() const { return name_; }
    std::optional<int> depth() const { return depth_; }  // max level index
    VarietyModelPtr level(int n) const;
    MorphismModelPtr bond(int n) const;

    const std::optional<MultiplierSystem>& chi_multipliers() const { return chi_steps_; }
    const std::optional<MultiplierSystem>& gamma_multipliers() const {
        return gamma_steps_;
    }

    // clamp a requested level to the tower's depth
    int clamp_level(int n) const {
        return depth_ && n > *depth_ ? *depth_ : n;
    }

private:
    Tower() = default;
    void ensure(int n) const;

    std::string name_;
    Grower grow_;
    std::optional<int> depth_;
    std::optional<MultiplierSystem> chi_steps_;
    std::optional<MultiplierSystem> gamma_steps_;
    mutable std::mutex mu_;
    mutable std::vector<VarietyModelPtr> levels_;
    mutable std::vector<MorphismModelPtr> bonds_;
};

// validates the bond chain and, when declared multipliers are present,
// that each bond's classify multiplier matches the declared step
ValidationReport validate_tower(const Tower& tw, int up_to_level);

// pi_{nm}: level(m) -> level(n) for n <= m; identity when n == m
MorphismModelPtr composite_bond(const Tower& tw, int n, int m);

// -------------------------------------------------------------- transitions

template <class F>
class TransitionSystem {
public:
    static TransitionSystem plain() { return TransitionSystem(); }
    // twist(n) lives on level(n+1); lifting multiplies by it after pullback
    static TransitionSystem twisted(std::function<F(int)> twist) {
        TransitionSystem t;
        t.twist_ = std::move(twist);
        return t;
    }

    bool is_twisted() const { return static_cast<bool>(twist_); }
    F twist(int n) const {
        if (!twist_) throw Error("plain transition system has no twist");
        return twist_(n);
    }

private:
    std::function<F(int)> twist_;
};

template <class F>
struct IndFunction {
    TowerPtr tower;
    TransitionSystem<F> transitions;
    int level = 0;
    F value;
};

using IntIndFunction = IndFunction<ConstructibleFunction>;
using ClassIndFunction = IndFunction<MotivicFunction>;

// dispatch between the two coefficient functors
inline ConstructibleFunction bf_pullback(const MorphismModel& f,
                                         const ConstructibleFunction& v) {
    return pullback(f, v);
}
inline MotivicFunction bf_pullback(const MorphismModel& f, const MotivicFunction& v) {
    return motivic_pullback(f, v);
}
inline ConstructibleFunction bf_pushforward(const MorphismModel& f,
                                            const ConstructibleFunction& v) {
    return pushforward(f, v);
}
inline MotivicFunction bf_pushforward(const MorphismModel& f, const MotivicFunction& v) {
    return motivic_pushforward(f, v);
}
inline Polynomial char_poly(const ConstructibleFunction& a, CharKind kind) {
    return kind == CharKind::euler ? Polynomial::constant(chi(a)) : gamma_class(a);
}
inline Polynomial char_poly(const MotivicFunction& m, CharKind kind) {
    if (kind != CharKind::gamma)
        throw Error("class-valued functions only have the class characteristic");
    return chi_gro(m);
}

// multiplier of one bond for the given characteristic, possibly twisted;
// present iff the per-target-stratum sum is one value for all target strata
std::optional<Polynomial> bond_multiplier(const MorphismModel& bond, CharKind kind);
std::optional<Polynomial> bond_multiplier(const MorphismModel& bond, CharKind kind,
                                          const ConstructibleFunction& twist);
std::optional<Polynomial> bond_multiplier(const MorphismModel& bond,
                                          const MotivicFunction& twist);

inline std::optional<Polynomial> transition_multiplier(
    const MorphismModel& b, CharKind kind, const TransitionSystem<ConstructibleFunction>& ts,
    int n) {
    return ts.is_twisted() ? bond_multiplier(b, kind, ts.twist(n))
                           : bond_multiplier(b, kind);
}
inline std::optional<Polynomial> transition_multiplier(
    const MorphismModel& b, CharKind /*kind*/, const TransitionSystem<MotivicFunction>& ts,
    int n) {
    return ts.is_twisted() ? bond_multiplier(b, ts.twist(n))
                           : bond_multiplier(b, CharKind::gamma);
}

// one lifting step, from level n to n+1
template <class F>
F step_lift(const TowerPtr& tower, const TransitionSystem<F>& ts, int n, const F& v) {
    auto b = tower->bond(n);
    F w = bf_pullback(*b, v);
    if (ts.is_twisted()) w = ts.twist(n) * w;
    return w;
}

template <class F>
IndFunction<F> ind_lift(const IndFunction<F>& f, int m) {
    if (m < f.level) throw Error("cannot lift below the representative level");
    IndFunction<F> r = f;
    for (int n = f.level; n < m; ++n) r.value = step_lift(f.tower, f.transitions, n, r.value);
    r.level = m;
    return r;
}

// true iff the two representatives agree after lifting to some common
// level <= horizon
template <class F>
bool ind_eq(const IndFunction<F>& a, const IndFunction<F>& b, int horizon) {
    int base = std::max(a.level, b.level);
    if (horizon < base) throw Error("ind_eq horizon below both representative levels");
    horizon = a.tower->clamp_level(horizon);
    if (horizon < base) throw Error("ind_eq horizon below both representative levels");
    IndFunction<F> x = ind_lift(a, base);
    IndFunction<F> y = ind_lift(b, base);
    for (int n = base;; ++n) {
        if (x.value == y.value) return true;
        if (n == horizon) return false;
        x.value = step_lift(x.tower, x.transitions, n, x.value);
        y.value = step_lift(y.tower, y.transitions, n, y.value);
    }
}

struct StabilityReport {
    bool stable_up_to_horizon = false;
    bool certified = false;
    std::optional<int> failing_level;
    int horizon = 0;
};

namespace detail {

template <class F>
bool certified_steps(const IndFunction<F>& f, const MultiplierSystem& P, CharKind kind) {
    // declared route: plain transitions whose tower declares exactly P
    if (!f.transitions.is_twisted()) {
        const auto& declared = (kind == CharKind::euler) ? f.tower->chi_multipliers()
                                                         : f.tower->gamma_multipliers();
        if (declared && *declared == P) return true;
    }
    // direct route: classify every bond; only conclusive when the whole
    // tower is covered
    std::optional<int> depth = f.tower->depth();
    if (!depth) return false;
    for (int n = f.level; n < *depth; ++n) {
        auto m = transition_multiplier(*f.tower->bond(n), kind, f.transitions, n);
        if (!m || *m != P.step(n)) return false;
    }
    return true;
}

}  // namespace detail

// checks the defining equality char(lift to m) = p_{nm} * char(value) for
// all m <= horizon, and reports whether the multiplier system is certified
// (in which case stability holds at every level without bound)
template <class F>
StabilityReport check_stability(const IndFunction<F>& f, const MultiplierSystem& P,
                                int horizon, CharKind kind = CharKind::gamma) {
    if (horizon < f.level) throw Error("stability horizon below the representative level");
    horizon = f.tower->clamp_level(horizon);
    StabilityReport rep;
    rep.horizon = horizon;
    rep.stable_up_to_horizon = true;
    Polynomial base = char_poly(f.value, kind);
    F cur = f.value;
    for (int n = f.level; n < horizon; ++n) {
        cur = step_lift(f.tower, f.transitions, n, cur);
        if (char_poly(cur, kind) != P.product(f.level, n + 1) * base) {
            rep.stable_up_to_horizon = false;
            rep.failing_level = n + 1;
            break;
        }
    }
    rep.certified = detail::certified_steps(f, P, kind);
    return rep;
}

// char(value) / step(0)*...*step(level-1) over the system's denominator
// set.  Requires stability (certified, or checked up to the horizon;
// horizon < 0 means level + 3, clamped to the tower depth).  Throws on
// unstable input, naming the failing level.
template <class F>
LocalizedClass pro_characteristic(const IndFunction<F>& f, const MultiplierSystem& P,
                                  CharKind kind, int horizon = -1,
                                  StabilityReport* stability_out = nullptr) {
    if (kind == CharKind::euler && !P.integer_steps())
        throw Error("the integer characteristic needs an integer multiplier system");
    if (horizon < 0) horizon = f.tower->clamp_level(f.level + 3);
    StabilityReport rep = check_stability(f, P, horizon, kind);
    if (stability_out) *stability_out = rep;
    if (!rep.certified && !rep.stable_up_to_horizon)
        throw Error("unstable representative: stability fails at level " +
                    std::to_string(rep.failing_level.value_or(f.level)));
    const DenominatorSetPtr& dens = P.denominators();
    std::vector<Integer> exps(dens->size(), 0);
    for (int i = 0; i < f.level; ++i) {
        auto idx = dens->index_of(P.step(i));
        if (!idx) throw Error("multiplier step missing from its denominator set");
        ++exps[*idx];
    }
    return LocalizedClass(dens, char_poly(f.value, kind), std::move(exps));
}

// ---------------------------------------------------------------- propoints

// compatible thread (x_0, ..., x_m) of stratum ids down the tower
struct ProPoint {
    std::vector<std::string> ids;
};

ValidationReport validate_propoint(const Tower& tw, const ProPoint& x);

// all threads of length m+1; each is determined by its level-m stratum
std::vector<ProPoint> enumerate_propoints(const Tower& tw, int m, size_t cap = 10000);

// the indicator of a level-n constructible set, with plain transitions
IndFunction<ConstructibleFunction> cylinder_function(TowerPtr tw, int n,
                                                     const ConstructibleSet& c);

// value of the representative at the thread's stratum of its level
template <class F>
auto functionize_eval(const IndFunction<F>& f, const ProPoint& x) {
    if (static_cast<int>(x.ids.size()) <= f.level)
        throw Error("propoint prefix too short for the representative level");
    return f.value.at(x.ids[f.level]);
}

// ------------------------------------------------------------ pro-morphisms

// levelwise morphisms source.level(n) -> target.level(n)
struct ProMorphism {
    TowerPtr source;
    TowerPtr target;
    std::function<MorphismModelPtr(int)> at;
};

ProMorphism identity_pro_morphism(TowerPtr tw);
ProMorphism compose(const ProMorphism& f, const ProMorphism& g);

// checks that (top, left, right, bottom) has the shape of a fiber square:
// commuting, pairs hit bijectively, fiber classes pulled back
ValidationReport check_fiber_square(const MorphismModel& top, const MorphismModel& left,
                                    const MorphismModel& right,
                                    const MorphismModel& bottom);

// validates the fiber squares between the two towers for the bonds below
// up_to_level
ValidationReport validate_pro_morphism(const ProMorphism& pm, int up_to_level);

// levelwise pushforward.  Squares up to validate_horizon (default: one
// square above the representative) must be fiber squares, and for twisted
// transitions the source twist must be the pullback of the target twist.
template <class F>
IndFunction<F> pro_pushforward(const ProMorphism& pm, const IndFunction<F>& a,
                               const TransitionSystem<F>& target_transitions,
                               int validate_horizon = -1) {
    if (a.tower != pm.source) throw Error("pro_pushforward: representative not on the source tower");
    if (validate_horizon < 0) validate_horizon = a.level + 1;
    validate_horizon = pm.source->clamp_level(validate_horizon);
    for (int n = a.level; n < validate_horizon; ++n) {
        auto rep = check_fiber_square(*pm.at(n + 1), *pm.source->bond(n),
                                      *pm.target->bond(n), *pm.at(n));
        if (!rep.ok())
            throw Error("pro_pushforward: level " + std::to_string(n) +
                        " square is not a fiber square: " + rep.violations.front());
        if (a.transitions.is_twisted() != target_transitions.is_twisted())
            throw Error("pro_pushforward: transition kinds differ");
        if (a.transitions.is_twisted()) {
            F pulled = bf_pullback(*pm.at(n + 1), target_transitions.twist(n));
            if (!(a.transitions.twist(n) == pulled))
                throw Error("pro_pushforward: source twist is not the pullback of the "
                            "target twist at bond " + std::to_string(n));
        }
    }
    IndFunction<F> r;
    r.tower = pm.target;
    r.transitions = target_transitions;
    r.level = a.level;
    r.value = bf_pushforward(*pm.at(a.level), a.value);
    return r;
}

// levelwise Euler evaluation; class-valued twists map to their integer
// shadows
IndFunction<ConstructibleFunction> e_transform_ind(const IndFunction<MotivicFunction>& a);

}  // namespace proalg
