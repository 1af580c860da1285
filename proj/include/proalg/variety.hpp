#pragma once

// Finite stratified variety models and the constructible-function calculus.
//
// A variety model is a finite list of strata, each carrying a class
// polynomial and a connected-component label.  A morphism model sends each
// source stratum to a target stratum with a constant fiber class, subject
// to stratum-local triviality cls(s) = g_s * cls(t(s)).  Constructible
// functions are integer-valued functions on strata.  All values are
// immutable; operations are pure.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proalg/ring.hpp"

namespace proalg {

struct Stratum {
    std::string id;
    Polynomial cls;
    std::string component;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

class VarietyModel;
using VarietyModelPtr = std::shared_ptr<const VarietyModel>;

class VarietyModel {
public:
    VarietyModel(std::string name, std::vector<Stratum> strata,
                 std::shared_ptr<const AtomTable> atom_table,
                 std::optional<int> smooth_dim = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<Stratum>& strata() const { return strata_; }
    const std::shared_ptr<const AtomTable>& atom_table() const { return table_; }
    std::optional<int> smooth_dim() const { return smooth_dim_; }

    bool has_stratum(const std::string& id) const;
    const Stratum& stratum(const std::string& id) const;

    Polynomial total_class() const;            // [X] = sum of stratum classes
    Integer stratum_euler(const std::string& id) const;  // chi_c via the table
    Integer chi() const;                                 // chi(X)

    ValidationReport validate() const;

    // structural identification used when binding file functions to towers
    bool same_stratum_ids(const VarietyModel& o) const;

private:
    std::string name_;
    std::vector<Stratum> strata_;
    std::shared_ptr<const AtomTable> table_;
    std::optional<int> smooth_dim_;
};

// subset of stratum ids
class ConstructibleSet {
public:
    ConstructibleSet() = default;
    explicit ConstructibleSet(std::set<std::string> ids) : ids_(std::move(ids)) {}
    static ConstructibleSet full(const VarietyModel& x);

    const std::set<std::string>& ids() const { return ids_; }
    bool contains(const std::string& id) const { return ids_.count(id) != 0; }

    ValidationReport validate(const VarietyModel& x) const;

private:
    std::set<std::string> ids_;
};

// integer-valued function on strata, zero off its support
class ConstructibleFunction {
public:
    ConstructibleFunction() = default;
    explicit ConstructibleFunction(VarietyModelPtr model) : model_(std::move(model)) {}
    ConstructibleFunction(VarietyModelPtr model, std::map<std::string, Integer> values);

    static ConstructibleFunction unit(VarietyModelPtr model);
    static ConstructibleFunction indicator(VarietyModelPtr model,
                                           const ConstructibleSet& c);

    const VarietyModelPtr& model() const { return model_; }
    Integer at(const std::string& id) const;
    void set(const std::string& id, Integer v);
    const std::map<std::string, Integer>& values() const { return values_; }
    bool is_zero() const { return values_.empty(); }

    ConstructibleFunction operator+(const ConstructibleFunction& o) const;
    ConstructibleFunction operator-(const ConstructibleFunction& o) const;
    ConstructibleFunction operator*(const ConstructibleFunction& o) const;  // pointwise
    ConstructibleFunction scaled(Integer c) const;

    bool operator==(const ConstructibleFunction& o) const;
    bool operator!=(const ConstructibleFunction& o) const { return !(*this == o); }

    std::string str() const;

private:
    VarietyModelPtr model_;
    std::map<std::string, Integer> values_;  // nonzero entries only
};

class MorphismModel;
using MorphismModelPtr = std::shared_ptr<const MorphismModel>;

// per-source-stratum target and fiber class
class MorphismModel {
public:
    struct Leg {
        std::string target_id;
        Polynomial fiber_class;
        bool operator==(const Leg& o) const = default;
    };

    MorphismModel(std::string name, VarietyModelPtr source, VarietyModelPtr target,
                  std::map<std::string, Leg> legs);

    static MorphismModelPtr identity(VarietyModelPtr x);

    const std::string& name() const { return name_; }
    const VarietyModelPtr& source() const { return source_; }
    const VarietyModelPtr& target() const { return target_; }
    const std::map<std::string, Leg>& legs() const { return legs_; }

    const std::string& target_of(const std::string& source_id) const;
    const Polynomial& fiber_class(const std::string& source_id) const;
    Integer fiber_euler(const std::string& source_id) const;

    bool is_surjective() const;
    ValidationReport validate() const;

private:
    std::string name_;
    VarietyModelPtr source_;
    VarietyModelPtr target_;
    std::map<std::string, Leg> legs_;
};

// ----------------------------------------------------------------- builders

VarietyModelPtr point_model(std::shared_ptr<const AtomTable> table,
                            const std::string& name = "pt",
                            const std::string& stratum_id = "pt");

// strata are pairs with ids joined by "."; classes multiply
VarietyModelPtr product_variety(const VarietyModelPtr& x, const VarietyModelPtr& y);

// restriction to a subset of strata, plus its inclusion morphism
std::pair<VarietyModelPtr, MorphismModelPtr> submodel_inclusion(
    const VarietyModelPtr& x, const ConstructibleSet& members,
    const std::string& name = "");

// requires disjoint stratum ids
VarietyModelPtr disjoint_union(const VarietyModelPtr& x, const VarietyModelPtr& y);

MorphismModelPtr morphism_to_point(const VarietyModelPtr& x, const VarietyModelPtr& pt);

// --------------------------------------------------------------- operations

Integer chi(const ConstructibleFunction& alpha);

ConstructibleFunction pushforward(const MorphismModel& f,
                                  const ConstructibleFunction& alpha);
ConstructibleFunction pullback(const MorphismModel& f,
                               const ConstructibleFunction& beta);

// value at (s,u) is alpha(s)*beta(u), on product_variety of the two models
ConstructibleFunction exterior_product(const ConstructibleFunction& alpha,
                                       const ConstructibleFunction& beta);

MorphismModelPtr compose(const MorphismModel& f, const MorphismModel& g);

struct FiberSquare {
    VarietyModelPtr w;
    MorphismModelPtr pr_x;
    MorphismModelPtr pr_y;
};

// W = X x_Z Y with projections; strata of W are the pairs over a common
// target stratum
FiberSquare fiber_square(const MorphismModel& f, const MorphismModel& g);

struct MorphismClassification {
    std::map<std::string, Integer> fiber_euler_profile;  // per target stratum
    bool is_euler = false;
    std::optional<Integer> chi_constant_multiplier;
    std::optional<Polynomial> gamma_constant_multiplier;
};

MorphismClassification classify_morphism(
    const MorphismModel& f,
    const ConstructibleFunction* alpha = nullptr);

// alpha . f^* beta
ConstructibleFunction bivariant_product(const ConstructibleFunction& alpha,
                                        const MorphismModel& f,
                                        const ConstructibleFunction& beta);

}  // namespace proalg
