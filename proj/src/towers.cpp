#include "proalg/towers.hpp"

namespace proalg {

TowerPtr build_power_tower(const VarietyModelPtr& x) {
    auto rep = x->validate();
    if (!rep.ok()) throw Error("power tower over an invalid base: " + rep.violations.front());
    std::optional<MultiplierSystem> chi_steps;
    if (x->chi() != 0)
        chi_steps = MultiplierSystem::constant(Polynomial::constant(x->chi()));
    std::optional<MultiplierSystem> gamma_steps;
    if (!x->total_class().is_zero())
        gamma_steps = MultiplierSystem::constant(x->total_class());
    Tower::Grower grow = [x](const VarietyModelPtr& level_n, int) {
        auto next = product_variety(level_n, x);
        std::map<std::string, MorphismModel::Leg> legs;
        for (const auto& s : level_n->strata())
            for (const auto& u : x->strata())
                legs[s.id + "." + u.id] = MorphismModel::Leg{s.id, u.cls};
        return std::make_shared<MorphismModel>("proj_" + next->name(), next, level_n,
                                               std::move(legs));
    };
    return Tower::generated("power_" + x->name(), x, std::move(grow),
                            std::move(chi_steps), std::move(gamma_steps));
}

TowerPtr build_arc_tower(const VarietyModelPtr& x, int d) {
    if (!x->smooth_dim())
        throw Error("arc tower needs a base flagged smooth (variety " + x->name() + ")");
    if (*x->smooth_dim() != d)
        throw Error("arc tower dimension " + std::to_string(d) +
                    " does not match the declared smooth dimension " +
                    std::to_string(*x->smooth_dim()));
    if (d < 0) throw Error("negative arc dimension");
    for (const auto& s : x->strata())
        if (!s.cls.is_signed_monomial())
            throw Error("arc tower base stratum " + s.id +
                        " has a non-monomial class (smoothness proxy fails)");
    Polynomial ld = Polynomial::atom(kAffineLineAtom).pow(d);
    auto gamma_steps = MultiplierSystem::constant(ld);
    auto chi_steps = MultiplierSystem::constant(Polynomial::constant(1));
    Tower::Grower grow = [x, ld, d](const VarietyModelPtr& level_n, int n) {
        std::vector<Stratum> strata;
        std::map<std::string, MorphismModel::Leg> legs;
        for (const auto& s : x->strata()) {
            Polynomial cls = s.cls * Polynomial::atom(kAffineLineAtom).pow((n + 1) * d);
            strata.push_back(Stratum{s.id, cls, s.component});
            legs[s.id] = MorphismModel::Leg{s.id, ld};
        }
        auto next = std::make_shared<VarietyModel>(
            "arc" + std::to_string(n + 1) + "_" + x->name(), std::move(strata),
            x->atom_table());
        return std::make_shared<MorphismModel>("trunc" + std::to_string(n), next,
                                               level_n, std::move(legs));
    };
    return Tower::generated("arc_" + x->name(), x, std::move(grow),
                            std::move(chi_steps), std::move(gamma_steps));
}

TowerPtr build_sequence_tower(std::shared_ptr<const AtomTable> table, int k) {
    if (k < 2) throw Error("sequence tower needs an alphabet of size at least 2");
    std::vector<Stratum> level0;
    for (int i = 0; i < k; ++i) {
        std::string id = std::to_string(i);
        level0.push_back(Stratum{id, Polynomial::constant(1), id});
    }
    auto base = std::make_shared<VarietyModel>("seq0_k" + std::to_string(k),
                                               std::move(level0), table);
    auto steps = MultiplierSystem::constant(Polynomial::constant(k));
    Tower::Grower grow = [table, k](const VarietyModelPtr& level_n, int n) {
        std::vector<Stratum> strata;
        std::map<std::string, MorphismModel::Leg> legs;
        for (const auto& s : level_n->strata()) {
            for (int i = 0; i < k; ++i) {
                std::string id = s.id + "." + std::to_string(i);
                strata.push_back(Stratum{id, Polynomial::constant(1), id});
                legs[id] = MorphismModel::Leg{s.id, Polynomial::constant(1)};
            }
        }
        auto next = std::make_shared<VarietyModel>(
            "seq" + std::to_string(n + 1) + "_k" + std::to_string(k), std::move(strata),
            table);
        return std::make_shared<MorphismModel>("shift" + std::to_string(n), next,
                                               level_n, std::move(legs));
    };
    return Tower::generated("seq_k" + std::to_string(k), base, std::move(grow), steps,
                            steps);
}

TowerPtr build_locally_trivial_tower(const VarietyModelPtr& base,
                                     const std::vector<VarietyModelPtr>& fibers) {
    auto rep = base->validate();
    if (!rep.ok()) throw Error("invalid tower base: " + rep.violations.front());
    std::vector<VarietyModelPtr> levels{base};
    std::vector<MorphismModelPtr> bonds;
    std::vector<Polynomial> gamma_steps;
    std::vector<Polynomial> chi_steps;
    bool chi_ok = true;
    for (const auto& f : fibers) {
        auto frep = f->validate();
        if (!frep.ok()) throw Error("invalid fiber model: " + frep.violations.front());
        const VarietyModelPtr& cur = levels.back();
        auto next = product_variety(cur, f);
        std::map<std::string, MorphismModel::Leg> legs;
        for (const auto& s : cur->strata())
            for (const auto& u : f->strata())
                legs[s.id + "." + u.id] = MorphismModel::Leg{s.id, u.cls};
        bonds.push_back(std::make_shared<MorphismModel>("proj_" + next->name(), next,
                                                        cur, std::move(legs)));
        levels.push_back(next);
        gamma_steps.push_back(f->total_class());
        if (f->chi() == 0)
            chi_ok = false;
        else
            chi_steps.push_back(Polynomial::constant(f->chi()));
    }
    std::optional<MultiplierSystem> chi_ms;
    if (chi_ok && !chi_steps.empty()) chi_ms = MultiplierSystem(std::move(chi_steps));
    std::optional<MultiplierSystem> gamma_ms;
    if (!gamma_steps.empty()) gamma_ms = MultiplierSystem(std::move(gamma_steps));
    return Tower::from_levels("bundle_" + base->name(), std::move(levels),
                              std::move(bonds), std::move(chi_ms), std::move(gamma_ms));
}

LocalizedClass motivic_measure(const TowerPtr& tw, int n, const ConstructibleSet& c) {
    if (!tw->gamma_multipliers())
        throw Error("tower " + tw->name() + " has no certified gamma multipliers");
    auto f = cylinder_function(tw, n, c);
    return pro_characteristic(f, *tw->gamma_multipliers(), CharKind::gamma);
}

MetricValue sequence_metric(int k, const std::vector<int>& a, const std::vector<int>& b) {
    if (k < 2) throw Error("metric needs an alphabet of size at least 2");
    if (a.size() != b.size()) throw Error("metric prefixes have different lengths");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] < 0 || a[i] >= k || b[i] < 0 || b[i] >= k)
            throw Error("symbol out of range 0.." + std::to_string(k - 1));
    MetricValue v;
    Integer power = 1;  // k^i
    for (size_t i = 0; i < a.size(); ++i) {
        Integer diff = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
        v.partial = v.partial + Rational(diff, power);
        power *= k;
    }
    // (k-1) * sum_{i >= m} k^-i telescopes to k^(1-m)
    Rational tail(k);
    for (size_t i = 0; i < a.size(); ++i) tail = tail * Rational(1, k);
    v.tail_bound = tail;
    return v;
}

}  // namespace proalg
