#pragma once

// The relative class group over a stratified model: class-valued functions
// on strata, with pushforward, pullback, exterior product, the class-level
// characteristic, and the transformations between class-valued and
// integer-valued functions.

#include "proalg/variety.hpp"

namespace proalg {

// stratum-id -> class polynomial; the value at a stratum is the class of
// the fiber of a representing morphism over that stratum
class MotivicFunction {
public:
    MotivicFunction() = default;
    explicit MotivicFunction(VarietyModelPtr model) : model_(std::move(model)) {}
    MotivicFunction(VarietyModelPtr model, std::map<std::string, Polynomial> values);

    static MotivicFunction unit(VarietyModelPtr model);

    const VarietyModelPtr& model() const { return model_; }
    Polynomial at(const std::string& id) const;
    void set(const std::string& id, Polynomial v);
    const std::map<std::string, Polynomial>& values() const { return values_; }
    bool is_zero() const { return values_.empty(); }

    MotivicFunction operator+(const MotivicFunction& o) const;
    MotivicFunction operator-(const MotivicFunction& o) const;
    MotivicFunction operator*(const MotivicFunction& o) const;  // pointwise

    bool operator==(const MotivicFunction& o) const { return values_ == o.values_; }
    bool operator!=(const MotivicFunction& o) const { return !(*this == o); }

    std::string str() const;

private:
    VarietyModelPtr model_;
    std::map<std::string, Polynomial> values_;  // nonzero entries only
};

// class of [W -> X]: sum of fiber classes over each target stratum
MotivicFunction motivic_from_morphism(const MorphismModel& h);

MotivicFunction motivic_pushforward(const MorphismModel& f, const MotivicFunction& m);
MotivicFunction motivic_pullback(const MorphismModel& g, const MotivicFunction& m);
MotivicFunction motivic_exterior(const MotivicFunction& m, const MotivicFunction& n);

// class-level characteristic: sum of value * stratum class
Polynomial chi_gro(const MotivicFunction& m);

// stratumwise integer Euler evaluation
ConstructibleFunction e_transform(const MotivicFunction& m);

// integer values reread as constant classes
MotivicFunction iota(const ConstructibleFunction& alpha);

// Gamma = chi_gro after iota
Polynomial gamma_class(const ConstructibleFunction& alpha);

// The canonical transformation out of the motivic functor, computed by its
// defining formula h_* p_W^*(unit).  The two receivers are the constructible
// and motivic functors themselves.
ConstructibleFunction tau_canonical_constructible(const MorphismModel& h);
MotivicFunction tau_canonical_motivic(const MorphismModel& h);

// pointwise bivariant product m . f^* n
MotivicFunction motivic_bivariant_product(const MotivicFunction& m,
                                          const MorphismModel& f,
                                          const MotivicFunction& n);

}  // namespace proalg
