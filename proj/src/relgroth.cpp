#include "proalg/relgroth.hpp"

#include <sstream>

namespace proalg {

MotivicFunction::MotivicFunction(VarietyModelPtr model,
                                 std::map<std::string, Polynomial> values)
    : model_(std::move(model)) {
    for (auto& [id, v] : values)
        if (!v.is_zero()) values_.emplace(id, std::move(v));
}

MotivicFunction MotivicFunction::unit(VarietyModelPtr model) {
    MotivicFunction m(model);
    for (const auto& s : model->strata()) m.values_[s.id] = Polynomial::constant(1);
    return m;
}

Polynomial MotivicFunction::at(const std::string& id) const {
    auto it = values_.find(id);
    return it == values_.end() ? Polynomial() : it->second;
}

void MotivicFunction::set(const std::string& id, Polynomial v) {
    if (v.is_zero())
        values_.erase(id);
    else
        values_[id] = std::move(v);
}

MotivicFunction MotivicFunction::operator+(const MotivicFunction& o) const {
    MotivicFunction r = *this;
    for (const auto& [id, v] : o.values_) r.set(id, r.at(id) + v);
    return r;
}

MotivicFunction MotivicFunction::operator-(const MotivicFunction& o) const {
    MotivicFunction r = *this;
    for (const auto& [id, v] : o.values_) r.set(id, r.at(id) - v);
    return r;
}

MotivicFunction MotivicFunction::operator*(const MotivicFunction& o) const {
    MotivicFunction r(model_);
    for (const auto& [id, v] : values_) r.set(id, v * o.at(id));
    return r;
}

std::string MotivicFunction::str() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& [id, v] : values_) {
        if (!first) out << ", ";
        first = false;
        out << id << ": " << v.str();
    }
    out << "}";
    return out.str();
}

MotivicFunction motivic_from_morphism(const MorphismModel& h) {
    MotivicFunction m(h.target());
    for (const auto& s : h.source()->strata()) {
        const std::string& t = h.target_of(s.id);
        m.set(t, m.at(t) + h.fiber_class(s.id));
    }
    return m;
}

MotivicFunction motivic_pushforward(const MorphismModel& f, const MotivicFunction& m) {
    MotivicFunction r(f.target());
    for (const auto& [id, v] : m.values()) {
        const std::string& t = f.target_of(id);
        r.set(t, r.at(t) + v * f.fiber_class(id));
    }
    return r;
}

MotivicFunction motivic_pullback(const MorphismModel& g, const MotivicFunction& m) {
    MotivicFunction r(g.source());
    for (const auto& s : g.source()->strata()) r.set(s.id, m.at(g.target_of(s.id)));
    return r;
}

MotivicFunction motivic_exterior(const MotivicFunction& m, const MotivicFunction& n) {
    auto prod = product_variety(m.model(), n.model());
    MotivicFunction r(prod);
    for (const auto& [sa, va] : m.values())
        for (const auto& [sb, vb] : n.values()) r.set(sa + "." + sb, va * vb);
    return r;
}

Polynomial chi_gro(const MotivicFunction& m) {
    Polynomial c;
    const VarietyModel& x = *m.model();
    for (const auto& [id, v] : m.values()) c += v * x.stratum(id).cls;
    return c;
}

ConstructibleFunction e_transform(const MotivicFunction& m) {
    ConstructibleFunction r(m.model());
    EvaluationMap eps = m.model()->atom_table()->euler_map();
    for (const auto& [id, v] : m.values()) r.set(id, eps(v).constant_value());
    return r;
}

MotivicFunction iota(const ConstructibleFunction& alpha) {
    MotivicFunction r(alpha.model());
    for (const auto& [id, v] : alpha.values()) r.set(id, Polynomial::constant(v));
    return r;
}

Polynomial gamma_class(const ConstructibleFunction& alpha) {
    Polynomial c;
    const VarietyModel& x = *alpha.model();
    for (const auto& [id, v] : alpha.values()) c += Polynomial::constant(v) * x.stratum(id).cls;
    return c;
}

ConstructibleFunction tau_canonical_constructible(const MorphismModel& h) {
    auto pt = point_model(h.source()->atom_table());
    auto p_w = morphism_to_point(h.source(), pt);
    ConstructibleFunction unit_pt = ConstructibleFunction::unit(pt);
    return pushforward(h, pullback(*p_w, unit_pt));
}

MotivicFunction tau_canonical_motivic(const MorphismModel& h) {
    auto pt = point_model(h.source()->atom_table());
    auto p_w = morphism_to_point(h.source(), pt);
    MotivicFunction unit_pt = MotivicFunction::unit(pt);
    return motivic_pushforward(h, motivic_pullback(*p_w, unit_pt));
}

MotivicFunction motivic_bivariant_product(const MotivicFunction& m,
                                          const MorphismModel& f,
                                          const MotivicFunction& n) {
    return m * motivic_pullback(f, n);
}

}  // namespace proalg
