#pragma once

// The line-oriented model file format.
//
//   atom NAME euler=INT [hodge=POLY]
//   variety NAME [smooth=INT] { ID class=POLY component=ID ; ... }
//   morphism NAME : SRC -> DST { ID -> ID fiber=POLY ; ... }
//   tower NAME kind=power base=ID
//   tower NAME kind=arc base=ID dim=INT
//   tower NAME kind=sequence k=INT
//   tower NAME kind=locally_trivial base=ID fibers=[ID,...]
//   tower NAME kind=explicit levels=[ID,...] bonds=[ID,...] [multipliers=ID]
//   function NAME on=ID { ID = POLY ; ... }
//   multipliers NAME steps=[POLY,...] [certified]
//   # comment to end of line
//
// POLY uses the ring syntax: integer coefficients, atoms as identifiers,
// `*` product, `^` positive-integer power, `+`/`-` between terms.

#include <map>
#include <string>
#include <vector>

#include "proalg/towers.hpp"

namespace proalg {

class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int col)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " +
                msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

Polynomial parse_polynomial(const std::string& text);

struct AtomDecl {
    std::string name;
    Integer euler = 0;
    std::optional<Polynomial> hodge;
    bool operator==(const AtomDecl& o) const = default;
};

struct TowerDecl {
    std::string name;
    std::string kind;  // power | arc | sequence | locally_trivial | explicit
    std::string base;
    int dim = 0;
    int k = 0;
    std::vector<std::string> levels;
    std::vector<std::string> bonds;
    std::vector<std::string> fibers;
    std::string multipliers;  // optional link for explicit towers
    bool operator==(const TowerDecl& o) const = default;
};

struct FunctionDecl {
    std::string name;
    std::string on;
    std::map<std::string, Polynomial> values;
    bool operator==(const FunctionDecl& o) const = default;

    bool integer_valued() const;
};

struct MultipliersDecl {
    std::string name;
    std::vector<Polynomial> steps;
    bool certified = false;
    bool operator==(const MultipliersDecl& o) const = default;
};

class ModelFile {
public:
    static ModelFile parse(const std::string& text);
    std::string print() const;

    const std::shared_ptr<const AtomTable>& atoms() const { return table_; }

    const std::vector<AtomDecl>& atom_decls() const { return atom_decls_; }
    const std::vector<std::string>& variety_order() const { return variety_order_; }
    const std::vector<std::string>& morphism_order() const { return morphism_order_; }
    const std::vector<TowerDecl>& tower_decls() const { return tower_decls_; }
    const std::vector<FunctionDecl>& function_decls() const { return function_decls_; }
    const std::vector<MultipliersDecl>& multiplier_decls() const {
        return multiplier_decls_;
    }

    bool has_variety(const std::string& name) const;
    VarietyModelPtr variety(const std::string& name) const;
    MorphismModelPtr morphism(const std::string& name) const;
    const TowerDecl& tower_decl(const std::string& name) const;
    const FunctionDecl& function_decl(const std::string& name) const;
    const MultipliersDecl* find_multipliers(const std::string& name) const;

    // builds the named tower; certified multiplier links become the
    // tower's declared systems
    TowerPtr instantiate_tower(const std::string& name) const;

    ConstructibleFunction constructible(const FunctionDecl& f) const;
    MotivicFunction motivic(const FunctionDecl& f) const;

    bool operator==(const ModelFile& o) const;

private:
    std::shared_ptr<const AtomTable> table_;
    std::vector<AtomDecl> atom_decls_;
    std::map<std::string, VarietyModelPtr> varieties_;
    std::vector<std::string> variety_order_;
    std::map<std::string, MorphismModelPtr> morphisms_;
    std::vector<std::string> morphism_order_;
    std::vector<TowerDecl> tower_decls_;
    std::vector<FunctionDecl> function_decls_;
    std::vector<MultipliersDecl> multiplier_decls_;
};

// every validation the file's contents admit: model invariants, local
// triviality, tower multiplier certification, zero multiplier steps,
// base change on the fiber squares of declared morphism pairs with a
// common target
ValidationReport check_model_file(const ModelFile& mf);

}  // namespace proalg
