#include "proalg/variety.hpp"

#include <algorithm>
#include <sstream>

namespace proalg {

std::string ValidationReport::str() const {
    std::ostringstream out;
    for (const auto& v : violations) out << v << "\n";
    return out.str();
}

// ------------------------------------------------------------- VarietyModel

VarietyModel::VarietyModel(std::string name, std::vector<Stratum> strata,
                           std::shared_ptr<const AtomTable> atom_table,
                           std::optional<int> smooth_dim)
    : name_(std::move(name)),
      strata_(std::move(strata)),
      table_(std::move(atom_table)),
      smooth_dim_(smooth_dim) {
    if (!table_) throw Error("variety model without an atom table");
    for (auto& s : strata_)
        if (s.component.empty()) s.component = s.id;
}

bool VarietyModel::has_stratum(const std::string& id) const {
    for (const auto& s : strata_)
        if (s.id == id) return true;
    return false;
}

const Stratum& VarietyModel::stratum(const std::string& id) const {
    for (const auto& s : strata_)
        if (s.id == id) return s;
    throw Error("unknown stratum " + id + " in variety " + name_);
}

Polynomial VarietyModel::total_class() const {
    Polynomial t;
    for (const auto& s : strata_) t += s.cls;
    return t;
}

Integer VarietyModel::stratum_euler(const std::string& id) const {
    return table_->euler_map()(stratum(id).cls).constant_value();
}

Integer VarietyModel::chi() const {
    Integer c = 0;
    EvaluationMap eps = table_->euler_map();
    for (const auto& s : strata_) c += eps(s.cls).constant_value();
    return c;
}

ValidationReport VarietyModel::validate() const {
    ValidationReport r;
    if (strata_.empty())
        r.violations.push_back("variety " + name_ + ": nonempty strata required");
    std::set<std::string> seen;
    for (const auto& s : strata_) {
        if (!seen.insert(s.id).second)
            r.violations.push_back("variety " + name_ + ": duplicate stratum id " + s.id);
        if (s.cls.is_zero())
            r.violations.push_back("variety " + name_ + ": stratum " + s.id +
                                   " has zero class");
        for (const auto& a : s.cls.atoms())
            if (!table_->has(a))
                r.violations.push_back("variety " + name_ + ": stratum " + s.id +
                                       " uses undeclared atom " + a);
    }
    return r;
}

bool VarietyModel::same_stratum_ids(const VarietyModel& o) const {
    if (strata_.size() != o.strata_.size()) return false;
    std::set<std::string> a, b;
    for (const auto& s : strata_) a.insert(s.id);
    for (const auto& s : o.strata_) b.insert(s.id);
    return a == b;
}

// -------------------------------------------------------- ConstructibleSet

ConstructibleSet ConstructibleSet::full(const VarietyModel& x) {
    std::set<std::string> ids;
    for (const auto& s : x.strata()) ids.insert(s.id);
    return ConstructibleSet(std::move(ids));
}

ValidationReport ConstructibleSet::validate(const VarietyModel& x) const {
    ValidationReport r;
    for (const auto& id : ids_)
        if (!x.has_stratum(id))
            r.violations.push_back("constructible set member " + id +
                                   " is not a stratum of " + x.name());
    return r;
}

// --------------------------------------------------- ConstructibleFunction

ConstructibleFunction::ConstructibleFunction(VarietyModelPtr model,
                                             std::map<std::string, Integer> values)
    : model_(std::move(model)) {
    for (auto& [id, v] : values)
        if (v != 0) values_.emplace(id, v);
}

ConstructibleFunction ConstructibleFunction::unit(VarietyModelPtr model) {
    ConstructibleFunction f(model);
    for (const auto& s : model->strata()) f.values_[s.id] = 1;
    return f;
}

ConstructibleFunction ConstructibleFunction::indicator(VarietyModelPtr model,
                                                       const ConstructibleSet& c) {
    ConstructibleFunction f(std::move(model));
    for (const auto& id : c.ids()) f.values_[id] = 1;
    return f;
}

Integer ConstructibleFunction::at(const std::string& id) const {
    auto it = values_.find(id);
    return it == values_.end() ? 0 : it->second;
}

void ConstructibleFunction::set(const std::string& id, Integer v) {
    if (v == 0)
        values_.erase(id);
    else
        values_[id] = v;
}

ConstructibleFunction ConstructibleFunction::operator+(
    const ConstructibleFunction& o) const {
    ConstructibleFunction r = *this;
    for (const auto& [id, v] : o.values_) r.set(id, r.at(id) + v);
    return r;
}

ConstructibleFunction ConstructibleFunction::operator-(
    const ConstructibleFunction& o) const {
    ConstructibleFunction r = *this;
    for (const auto& [id, v] : o.values_) r.set(id, r.at(id) - v);
    return r;
}

ConstructibleFunction ConstructibleFunction::operator*(
    const ConstructibleFunction& o) const {
    ConstructibleFunction r(model_);
    for (const auto& [id, v] : values_) r.set(id, v * o.at(id));
    return r;
}

ConstructibleFunction ConstructibleFunction::scaled(Integer c) const {
    ConstructibleFunction r(model_);
    for (const auto& [id, v] : values_) r.set(id, v * c);
    return r;
}

bool ConstructibleFunction::operator==(const ConstructibleFunction& o) const {
    return values_ == o.values_;
}

std::string ConstructibleFunction::str() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [id, v] : values_) {
        if (!first) out << ", ";
        first = false;
        out << id << ": " << v;
    }
    out << "}";
    return out.str();
}

// ------------------------------------------------------------ MorphismModel

MorphismModel::MorphismModel(std::string name, VarietyModelPtr source,
                             VarietyModelPtr target, std::map<std::string, Leg> legs)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      legs_(std::move(legs)) {
    if (!source_ || !target_) throw Error("morphism model without source or target");
}

MorphismModelPtr MorphismModel::identity(VarietyModelPtr x) {
    std::map<std::string, Leg> legs;
    for (const auto& s : x->strata())
        legs[s.id] = Leg{s.id, Polynomial::constant(1)};
    return std::make_shared<MorphismModel>("id_" + x->name(), x, x, std::move(legs));
}

const std::string& MorphismModel::target_of(const std::string& source_id) const {
    auto it = legs_.find(source_id);
    if (it == legs_.end())
        throw Error("morphism " + name_ + " has no leg for stratum " + source_id);
    return it->second.target_id;
}

const Polynomial& MorphismModel::fiber_class(const std::string& source_id) const {
    auto it = legs_.find(source_id);
    if (it == legs_.end())
        throw Error("morphism " + name_ + " has no leg for stratum " + source_id);
    return it->second.fiber_class;
}

Integer MorphismModel::fiber_euler(const std::string& source_id) const {
    return source_->atom_table()->euler_map()(fiber_class(source_id)).constant_value();
}

bool MorphismModel::is_surjective() const {
    std::set<std::string> hit;
    for (const auto& [_, leg] : legs_) hit.insert(leg.target_id);
    for (const auto& t : target_->strata())
        if (hit.count(t.id) == 0) return false;
    return true;
}

ValidationReport MorphismModel::validate() const {
    ValidationReport r;
    auto src = source_->validate();
    auto tgt = target_->validate();
    r.violations.insert(r.violations.end(), src.violations.begin(), src.violations.end());
    r.violations.insert(r.violations.end(), tgt.violations.begin(), tgt.violations.end());
    for (const auto& s : source_->strata()) {
        auto it = legs_.find(s.id);
        if (it == legs_.end()) {
            r.violations.push_back("morphism " + name_ + ": stratum " + s.id +
                                   " has no target");
            continue;
        }
        const Leg& leg = it->second;
        if (!target_->has_stratum(leg.target_id)) {
            r.violations.push_back("morphism " + name_ + ": target stratum " +
                                   leg.target_id + " does not exist");
            continue;
        }
        if (s.cls != leg.fiber_class * target_->stratum(leg.target_id).cls)
            r.violations.push_back("morphism " + name_ + ": local triviality fails at " +
                                   s.id + " (cls != fiber * target cls)");
    }
    for (const auto& [id, _] : legs_)
        if (!source_->has_stratum(id))
            r.violations.push_back("morphism " + name_ + ": leg for unknown stratum " + id);
    return r;
}

// ------------------------------------------------------------------ builders

VarietyModelPtr point_model(std::shared_ptr<const AtomTable> table,
                            const std::string& name, const std::string& stratum_id) {
    std::vector<Stratum> strata{{stratum_id, Polynomial::constant(1), stratum_id}};
    return std::make_shared<VarietyModel>(name, std::move(strata), std::move(table));
}

VarietyModelPtr product_variety(const VarietyModelPtr& x, const VarietyModelPtr& y) {
    std::vector<Stratum> strata;
    for (const auto& s : x->strata())
        for (const auto& u : y->strata())
            strata.push_back(Stratum{s.id + "." + u.id, s.cls * u.cls,
                                     s.component + "." + u.component});
    return std::make_shared<VarietyModel>(x->name() + "*" + y->name(),
                                          std::move(strata), x->atom_table());
}

std::pair<VarietyModelPtr, MorphismModelPtr> submodel_inclusion(
    const VarietyModelPtr& x, const ConstructibleSet& members, const std::string& name) {
    std::vector<Stratum> strata;
    std::map<std::string, MorphismModel::Leg> legs;
    for (const auto& s : x->strata()) {
        if (!members.contains(s.id)) continue;
        strata.push_back(s);
        legs[s.id] = MorphismModel::Leg{s.id, Polynomial::constant(1)};
    }
    auto w = std::make_shared<VarietyModel>(
        name.empty() ? x->name() + "_sub" : name, std::move(strata), x->atom_table());
    auto incl = std::make_shared<MorphismModel>("incl_" + w->name(), w, x, std::move(legs));
    return {w, incl};
}

VarietyModelPtr disjoint_union(const VarietyModelPtr& x, const VarietyModelPtr& y) {
    std::vector<Stratum> strata = x->strata();
    for (const auto& s : y->strata()) {
        if (x->has_stratum(s.id))
            throw Error("disjoint union with colliding stratum id " + s.id);
        strata.push_back(s);
    }
    return std::make_shared<VarietyModel>(x->name() + "+" + y->name(),
                                          std::move(strata), x->atom_table());
}

MorphismModelPtr morphism_to_point(const VarietyModelPtr& x, const VarietyModelPtr& pt) {
    if (pt->strata().size() != 1) throw Error("target is not a point model");
    const std::string& p = pt->strata().front().id;
    std::map<std::string, MorphismModel::Leg> legs;
    for (const auto& s : x->strata()) legs[s.id] = MorphismModel::Leg{p, s.cls};
    return std::make_shared<MorphismModel>(x->name() + "_to_pt", x, pt, std::move(legs));
}

// ---------------------------------------------------------------- operations

Integer chi(const ConstructibleFunction& alpha) {
    Integer c = 0;
    const VarietyModel& x = *alpha.model();
    for (const auto& [id, v] : alpha.values()) c += v * x.stratum_euler(id);
    return c;
}

ConstructibleFunction pushforward(const MorphismModel& f,
                                  const ConstructibleFunction& alpha) {
    ConstructibleFunction r(f.target());
    for (const auto& [id, v] : alpha.values()) {
        const std::string& t = f.target_of(id);
        r.set(t, r.at(t) + v * f.fiber_euler(id));
    }
    return r;
}

ConstructibleFunction pullback(const MorphismModel& f,
                               const ConstructibleFunction& beta) {
    ConstructibleFunction r(f.source());
    for (const auto& s : f.source()->strata()) r.set(s.id, beta.at(f.target_of(s.id)));
    return r;
}

ConstructibleFunction exterior_product(const ConstructibleFunction& alpha,
                                       const ConstructibleFunction& beta) {
    auto prod = product_variety(alpha.model(), beta.model());
    ConstructibleFunction r(prod);
    for (const auto& [sa, va] : alpha.values())
        for (const auto& [sb, vb] : beta.values()) r.set(sa + "." + sb, va * vb);
    return r;
}

MorphismModelPtr compose(const MorphismModel& f, const MorphismModel& g) {
    if (f.target() != g.source() && !f.target()->same_stratum_ids(*g.source()))
        throw Error("compose: target of " + f.name() + " is not the source of " +
                    g.name());
    std::map<std::string, MorphismModel::Leg> legs;
    for (const auto& [id, leg] : f.legs()) {
        const std::string& mid = leg.target_id;
        legs[id] = MorphismModel::Leg{g.target_of(mid),
                                      leg.fiber_class * g.fiber_class(mid)};
    }
    return std::make_shared<MorphismModel>(g.name() + "." + f.name(), f.source(),
                                           g.target(), std::move(legs));
}

FiberSquare fiber_square(const MorphismModel& f, const MorphismModel& g) {
    if (f.target() != g.target() && !f.target()->same_stratum_ids(*g.target()))
        throw Error("fiber square without a common target");
    std::vector<Stratum> strata;
    std::map<std::string, MorphismModel::Leg> legs_x, legs_y;
    for (const auto& s : f.source()->strata()) {
        for (const auto& u : g.source()->strata()) {
            if (f.target_of(s.id) != g.target_of(u.id)) continue;
            const Polynomial& base = f.target()->stratum(f.target_of(s.id)).cls;
            std::string id = s.id + "." + u.id;
            strata.push_back(Stratum{id, base * f.fiber_class(s.id) * g.fiber_class(u.id),
                                     s.component + "." + u.component});
            legs_x[id] = MorphismModel::Leg{s.id, g.fiber_class(u.id)};
            legs_y[id] = MorphismModel::Leg{u.id, f.fiber_class(s.id)};
        }
    }
    auto w = std::make_shared<VarietyModel>(
        f.source()->name() + "x" + g.source()->name(), std::move(strata),
        f.source()->atom_table());
    FiberSquare sq;
    sq.w = w;
    sq.pr_x = std::make_shared<MorphismModel>("pr_" + f.source()->name(), w, f.source(),
                                              std::move(legs_x));
    sq.pr_y = std::make_shared<MorphismModel>("pr_" + g.source()->name(), w, g.source(),
                                              std::move(legs_y));
    return sq;
}

MorphismClassification classify_morphism(const MorphismModel& f,
                                         const ConstructibleFunction* alpha) {
    MorphismClassification out;
    std::map<std::string, Integer> plain_sum;
    std::map<std::string, Polynomial> class_sum;
    for (const auto& t : f.target()->strata()) {
        out.fiber_euler_profile[t.id] = 0;
        plain_sum[t.id] = 0;
        class_sum[t.id] = Polynomial();
    }
    for (const auto& s : f.source()->strata()) {
        const std::string& t = f.target_of(s.id);
        Integer e = f.fiber_euler(s.id);
        Integer weight = alpha ? alpha->at(s.id) : 1;
        out.fiber_euler_profile[t] += weight * e;
        plain_sum[t] += e;
        class_sum[t] += f.fiber_class(s.id);
    }

    // constant along connected components of the target
    std::map<std::string, std::optional<Integer>> per_component;
    out.is_euler = true;
    for (const auto& t : f.target()->strata()) {
        auto& slot = per_component[t.component];
        Integer v = out.fiber_euler_profile[t.id];
        if (!slot)
            slot = v;
        else if (*slot != v)
            out.is_euler = false;
    }

    bool chi_const = true, gamma_const = true;
    std::optional<Integer> c;
    std::optional<Polynomial> gamma;
    for (const auto& t : f.target()->strata()) {
        if (!c)
            c = plain_sum[t.id];
        else if (*c != plain_sum[t.id])
            chi_const = false;
        if (!gamma)
            gamma = class_sum[t.id];
        else if (*gamma != class_sum[t.id])
            gamma_const = false;
    }
    if (chi_const && c) out.chi_constant_multiplier = *c;
    if (gamma_const && gamma) out.gamma_constant_multiplier = *gamma;
    return out;
}

ConstructibleFunction bivariant_product(const ConstructibleFunction& alpha,
                                        const MorphismModel& f,
                                        const ConstructibleFunction& beta) {
    return alpha * pullback(f, beta);
}

}  // namespace proalg
