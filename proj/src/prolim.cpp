#include "proalg/prolim.hpp"

#include <algorithm>

namespace proalg {

// ---------------------------------------------------------- MultiplierSystem

MultiplierSystem::MultiplierSystem(std::vector<Polynomial> steps, bool repeat_last)
    : steps_(std::move(steps)), repeat_last_(repeat_last) {
    if (repeat_last_ && steps_.empty())
        throw Error("repeating multiplier system needs at least one step");
    std::vector<Polynomial> distinct;
    for (const auto& s : steps_) {
        if (s.is_zero()) throw Error("zero multiplier step");
        if (std::find(distinct.begin(), distinct.end(), s) == distinct.end())
            distinct.push_back(s);
    }
    dens_ = std::make_shared<DenominatorSet>(std::move(distinct));
}

MultiplierSystem MultiplierSystem::constant(Polynomial step) {
    std::vector<Polynomial> steps{std::move(step)};
    return MultiplierSystem(std::move(steps), true);
}

const Polynomial& MultiplierSystem::step(int n) const {
    if (n < 0) throw Error("negative multiplier index");
    if (n < static_cast<int>(steps_.size())) return steps_[static_cast<size_t>(n)];
    if (repeat_last_) return steps_.back();
    throw Error("multiplier step " + std::to_string(n) + " beyond the declared list");
}

Polynomial MultiplierSystem::product(int n, int m) const {
    if (n > m) throw Error("multiplier product with reversed levels");
    Polynomial p = Polynomial::constant(1);
    for (int i = n; i < m; ++i) p = p * step(i);
    return p;
}

bool MultiplierSystem::integer_steps() const {
    for (const auto& s : steps_)
        if (!s.is_constant()) return false;
    return true;
}

// --------------------------------------------------------------------- Tower

TowerPtr Tower::from_levels(std::string name, std::vector<VarietyModelPtr> levels,
                            std::vector<MorphismModelPtr> bonds,
                            std::optional<MultiplierSystem> chi_steps,
                            std::optional<MultiplierSystem> gamma_steps) {
    if (levels.empty()) throw Error("tower needs at least level 0");
    if (bonds.size() + 1 != levels.size())
        throw Error("tower needs exactly one bond per consecutive level pair");
    for (size_t n = 0; n < bonds.size(); ++n) {
        if (bonds[n]->target() != levels[n])
            throw Error("bond " + std::to_string(n) + " does not target level " +
                        std::to_string(n));
        if (bonds[n]->source() != levels[n + 1])
            throw Error("bond " + std::to_string(n) + " does not start at level " +
                        std::to_string(n + 1));
    }
    auto tw = std::shared_ptr<Tower>(new Tower());
    tw->name_ = std::move(name);
    tw->depth_ = static_cast<int>(levels.size()) - 1;
    tw->levels_ = std::move(levels);
    tw->bonds_ = std::move(bonds);
    tw->chi_steps_ = std::move(chi_steps);
    tw->gamma_steps_ = std::move(gamma_steps);
    return tw;
}

TowerPtr Tower::generated(std::string name, VarietyModelPtr level0, Grower grow,
                          std::optional<MultiplierSystem> chi_steps,
                          std::optional<MultiplierSystem> gamma_steps) {
    if (!level0) throw Error("tower needs level 0");
    if (!grow) throw Error("generated tower needs a grower");
    auto tw = std::shared_ptr<Tower>(new Tower());
    tw->name_ = std::move(name);
    tw->grow_ = std::move(grow);
    tw->levels_.push_back(std::move(level0));
    tw->chi_steps_ = std::move(chi_steps);
    tw->gamma_steps_ = std::move(gamma_steps);
    return tw;
}

void Tower::ensure(int n) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(levels_.size()) <= n) {
        int k = static_cast<int>(levels_.size()) - 1;
        MorphismModelPtr b = grow_(levels_[static_cast<size_t>(k)], k);
        if (b->target() != levels_[static_cast<size_t>(k)])
            throw Error("tower grower returned a bond off level " + std::to_string(k));
        bonds_.push_back(b);
        levels_.push_back(b->source());
    }
}

VarietyModelPtr Tower::level(int n) const {
    if (n < 0) throw Error("negative tower level");
    if (depth_ && n > *depth_)
        throw Error("level " + std::to_string(n) + " beyond tower depth " +
                    std::to_string(*depth_));
    ensure(n);
    return levels_[static_cast<size_t>(n)];
}

MorphismModelPtr Tower::bond(int n) const {
    if (n < 0) throw Error("negative bond index");
    if (depth_ && n >= *depth_)
        throw Error("bond " + std::to_string(n) + " beyond tower depth " +
                    std::to_string(*depth_));
    ensure(n + 1);
    return bonds_[static_cast<size_t>(n)];
}

ValidationReport validate_tower(const Tower& tw, int up_to_level) {
    ValidationReport r;
    up_to_level = tw.clamp_level(up_to_level);
    for (int n = 0; n <= up_to_level; ++n) {
        auto lv = tw.level(n)->validate();
        r.violations.insert(r.violations.end(), lv.violations.begin(), lv.violations.end());
    }
    for (int n = 0; n < up_to_level; ++n) {
        auto bv = tw.bond(n)->validate();
        r.violations.insert(r.violations.end(), bv.violations.begin(), bv.violations.end());
        if (tw.chi_multipliers()) {
            auto m = bond_multiplier(*tw.bond(n), CharKind::euler);
            if (!m || *m != tw.chi_multipliers()->step(n))
                r.violations.push_back("tower " + tw.name() + ": declared chi step " +
                                       std::to_string(n) + " does not match bond " +
                                       std::to_string(n));
        }
        if (tw.gamma_multipliers()) {
            auto m = bond_multiplier(*tw.bond(n), CharKind::gamma);
            if (!m || *m != tw.gamma_multipliers()->step(n))
                r.violations.push_back("tower " + tw.name() + ": declared gamma step " +
                                       std::to_string(n) + " does not match bond " +
                                       std::to_string(n));
        }
    }
    return r;
}

MorphismModelPtr composite_bond(const Tower& tw, int n, int m) {
    if (n > m) throw Error("composite bond with reversed levels");
    if (n == m) return MorphismModel::identity(tw.level(n));
    MorphismModelPtr acc = tw.bond(m - 1);
    for (int k = m - 2; k >= n; --k) acc = compose(*acc, *tw.bond(k));
    return acc;
}

// ------------------------------------------------------------ bond multiplier

namespace {

std::optional<Polynomial> constant_over_targets(
    const MorphismModel& bond,
    const std::function<Polynomial(const Stratum&)>& weight) {
    std::map<std::string, Polynomial> sums;
    for (const auto& t : bond.target()->strata()) sums[t.id] = Polynomial();
    for (const auto& s : bond.source()->strata())
        sums[bond.target_of(s.id)] += weight(s);
    std::optional<Polynomial> value;
    for (const auto& t : bond.target()->strata()) {
        if (!value)
            value = sums[t.id];
        else if (*value != sums[t.id])
            return std::nullopt;
    }
    return value;
}

}  // namespace

std::optional<Polynomial> bond_multiplier(const MorphismModel& bond, CharKind kind) {
    if (kind == CharKind::euler)
        return constant_over_targets(bond, [&](const Stratum& s) {
            return Polynomial::constant(bond.fiber_euler(s.id));
        });
    return constant_over_targets(
        bond, [&](const Stratum& s) { return bond.fiber_class(s.id); });
}

std::optional<Polynomial> bond_multiplier(const MorphismModel& bond, CharKind kind,
                                          const ConstructibleFunction& twist) {
    if (kind == CharKind::euler)
        return constant_over_targets(bond, [&](const Stratum& s) {
            return Polynomial::constant(twist.at(s.id) * bond.fiber_euler(s.id));
        });
    return constant_over_targets(bond, [&](const Stratum& s) {
        return Polynomial::constant(twist.at(s.id)) * bond.fiber_class(s.id);
    });
}

std::optional<Polynomial> bond_multiplier(const MorphismModel& bond,
                                          const MotivicFunction& twist) {
    return constant_over_targets(bond, [&](const Stratum& s) {
        return twist.at(s.id) * bond.fiber_class(s.id);
    });
}

// ------------------------------------------------------------------ propoints

ValidationReport validate_propoint(const Tower& tw, const ProPoint& x) {
    ValidationReport r;
    if (x.ids.empty()) {
        r.violations.push_back("empty propoint");
        return r;
    }
    for (size_t k = 0; k < x.ids.size(); ++k) {
        if (!tw.level(static_cast<int>(k))->has_stratum(x.ids[k])) {
            r.violations.push_back("propoint id " + x.ids[k] + " is not a stratum of level " +
                                   std::to_string(k));
            return r;
        }
    }
    for (size_t k = 0; k + 1 < x.ids.size(); ++k) {
        if (tw.bond(static_cast<int>(k))->target_of(x.ids[k + 1]) != x.ids[k])
            r.violations.push_back("propoint incompatible between levels " +
                                   std::to_string(k) + " and " + std::to_string(k + 1));
    }
    return r;
}

std::vector<ProPoint> enumerate_propoints(const Tower& tw, int m, size_t cap) {
    VarietyModelPtr top = tw.level(m);
    if (top->strata().size() > cap)
        throw Error("propoint enumeration exceeds the cap of " + std::to_string(cap));
    std::vector<ProPoint> out;
    for (const auto& s : top->strata()) {
        ProPoint x;
        x.ids.assign(static_cast<size_t>(m) + 1, "");
        x.ids[static_cast<size_t>(m)] = s.id;
        for (int k = m - 1; k >= 0; --k)
            x.ids[static_cast<size_t>(k)] =
                tw.bond(k)->target_of(x.ids[static_cast<size_t>(k) + 1]);
        out.push_back(std::move(x));
    }
    return out;
}

IndFunction<ConstructibleFunction> cylinder_function(TowerPtr tw, int n,
                                                     const ConstructibleSet& c) {
    VarietyModelPtr lv = tw->level(n);
    auto rep = c.validate(*lv);
    if (!rep.ok()) throw Error("bad cylinder set: " + rep.violations.front());
    IndFunction<ConstructibleFunction> f;
    f.tower = std::move(tw);
    f.transitions = TransitionSystem<ConstructibleFunction>::plain();
    f.level = n;
    f.value = ConstructibleFunction::indicator(lv, c);
    return f;
}

// -------------------------------------------------------------- pro-morphisms

ProMorphism identity_pro_morphism(TowerPtr tw) {
    ProMorphism pm;
    pm.source = tw;
    pm.target = tw;
    pm.at = [tw](int n) { return MorphismModel::identity(tw->level(n)); };
    return pm;
}

ProMorphism compose(const ProMorphism& f, const ProMorphism& g) {
    if (f.target != g.source) throw Error("pro-morphism composition mismatch");
    ProMorphism pm;
    pm.source = f.source;
    pm.target = g.target;
    auto fat = f.at;
    auto gat = g.at;
    pm.at = [fat, gat](int n) { return compose(*fat(n), *gat(n)); };
    return pm;
}

ValidationReport check_fiber_square(const MorphismModel& top, const MorphismModel& left,
                                    const MorphismModel& right,
                                    const MorphismModel& bottom) {
    ValidationReport r;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& x : left.source()->strata()) {
        const std::string& s = left.target_of(x.id);
        const std::string& u = top.target_of(x.id);
        if (bottom.target_of(s) != right.target_of(u)) {
            r.violations.push_back("square does not commute at " + x.id);
            return r;
        }
        if (!seen.insert({s, u}).second) {
            r.violations.push_back("corner stratum pair hit twice: " + s + ", " + u);
            return r;
        }
        if (left.fiber_class(x.id) != right.fiber_class(u)) {
            r.violations.push_back("left fiber class at " + x.id +
                                   " is not the right fiber class at " + u);
            return r;
        }
        if (top.fiber_class(x.id) != bottom.fiber_class(s)) {
            r.violations.push_back("top fiber class at " + x.id +
                                   " is not the bottom fiber class at " + s);
            return r;
        }
    }
    for (const auto& s : bottom.source()->strata())
        for (const auto& u : right.source()->strata())
            if (bottom.target_of(s.id) == right.target_of(u.id) &&
                seen.count({s.id, u.id}) == 0) {
                r.violations.push_back("missing corner stratum over the pair " + s.id +
                                       ", " + u.id);
                return r;
            }
    return r;
}

ValidationReport validate_pro_morphism(const ProMorphism& pm, int up_to_level) {
    ValidationReport r;
    up_to_level = pm.source->clamp_level(up_to_level);
    for (int n = 0; n < up_to_level; ++n) {
        auto rep = check_fiber_square(*pm.at(n + 1), *pm.source->bond(n),
                                      *pm.target->bond(n), *pm.at(n));
        if (!rep.ok()) {
            r.violations.push_back("level " + std::to_string(n) + ": " +
                                   rep.violations.front());
        }
    }
    return r;
}

IndFunction<ConstructibleFunction> e_transform_ind(const IndFunction<MotivicFunction>& a) {
    IndFunction<ConstructibleFunction> r;
    r.tower = a.tower;
    r.level = a.level;
    r.value = e_transform(a.value);
    if (a.transitions.is_twisted()) {
        auto src = a.transitions;
        r.transitions = TransitionSystem<ConstructibleFunction>::twisted(
            [src](int n) { return e_transform(src.twist(n)); });
    } else {
        r.transitions = TransitionSystem<ConstructibleFunction>::plain();
    }
    return r;
}

}  // namespace proalg
