#pragma once

// Exact arithmetic for the symbolic class ring and its localizations.
//
// The ring is the free commutative polynomial ring over named atom symbols
// with integer coefficients.  A monomial is a map variable -> positive
// exponent, a polynomial a map monomial -> nonzero coefficient.  Fractions
// over a declared set of denominator generators are kept as a numerator
// plus a formal exponent vector over the generators; equality is decided
// by cross-multiplication, which is valid because the free ring is a
// domain.
//
// Everything here is a value type; operations are pure.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace proalg {

using Integer = long long;

class Error : public std::exception {
public:
    explicit Error(std::string msg) : msg_(std::move(msg)) {}
    const char* what() const noexcept override { return msg_.c_str(); }

private:
    std::string msg_;
};

// Monomial: finite map atom-name -> positive exponent.  The empty map is
// the unit monomial.  operator< orders monomials by printing position:
// higher total degree first, ties broken lexicographically.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::map<std::string, int> exps);
    static Monomial atom(const std::string& name, int power = 1);

    int degree() const;
    bool is_unit() const { return exps_.empty(); }
    const std::map<std::string, int>& exponents() const { return exps_; }

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    // quotient o / *this; precondition: divides(o)
    Monomial quotient_of(const Monomial& o) const;

    bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
    bool operator<(const Monomial& o) const;

    std::string str() const;

private:
    std::map<std::string, int> exps_;
};

class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(Integer c);
    static Polynomial atom(const std::string& name, int power = 1);
    static Polynomial term(Integer coeff, Monomial m);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // precondition: is_constant()
    Integer constant_value() const;
    // single term with coefficient +1 or -1 (the arc-tower smoothness proxy)
    bool is_signed_monomial() const;

    const std::map<Monomial, Integer>& terms() const { return terms_; }
    std::set<std::string> atoms() const;
    int degree() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial pow(int n) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }
    // arbitrary total order, for use as a map key
    bool operator<(const Polynomial& o) const { return terms_ < o.terms_; }

    // Graded-lexicographic term order, e.g. "L^2 + 2*L + 1".
    std::string str() const;

private:
    void add_term(const Monomial& m, Integer c);
    std::map<Monomial, Integer> terms_;
};

// quotient q with a = q*b when b divides a exactly over the integers,
// absent otherwise.  Throws on b = 0.
std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b);

// Ring-homomorphism data: atom-name -> polynomial image.  Evaluation
// substitutes every atom of the input; an unassigned atom is an error
// naming the atom.
class EvaluationMap {
public:
    EvaluationMap() = default;
    explicit EvaluationMap(std::map<std::string, Polynomial> assignment)
        : assign_(std::move(assignment)) {}

    void assign(const std::string& atom, Polynomial value);
    bool has(const std::string& atom) const { return assign_.count(atom) != 0; }

    Polynomial operator()(const Polynomial& p) const;

private:
    std::map<std::string, Polynomial> assign_;
};

// Class symbol with its integer Euler characteristic and optional Hodge
// polynomial in the reserved variables u, v.
struct Atom {
    std::string name;
    Integer euler = 0;
    std::optional<Polynomial> hodge;
};

extern const std::string kReservedU;  // "u"
extern const std::string kReservedV;  // "v"
extern const std::string kAffineLineAtom;  // "L"

// Ordered atom declarations.  The class L of the affine line is always
// present, with euler = 1 and hodge = u*v unless overridden.
class AtomTable {
public:
    AtomTable();

    // Rejects duplicate names, the reserved names u/v, and hodge values
    // that do not specialize to euler at (u,v) = (1,1).
    void declare(Atom a);

    bool has(const std::string& name) const;
    const Atom& get(const std::string& name) const;
    const std::vector<Atom>& atoms() const { return atoms_; }

    // atom -> constant euler polynomial (the integer-Euler evaluation)
    EvaluationMap euler_map() const;
    // atom -> its Hodge polynomial; atoms without one are left unassigned
    EvaluationMap hodge_map() const;

private:
    std::vector<Atom> atoms_;
};

// substitution of the reserved Hodge variables; rejects inputs that
// mention any other atom
Polynomial specialize_hodge(const Polynomial& p_in_uv, const Polynomial& u_val,
                            const Polynomial& v_val);

// Ordered list of nonzero denominator generators.
class DenominatorSet {
public:
    DenominatorSet() = default;
    explicit DenominatorSet(std::vector<Polynomial> generators);

    size_t size() const { return gens_.size(); }
    const Polynomial& generator(size_t i) const { return gens_[i]; }
    const std::vector<Polynomial>& generators() const { return gens_; }
    std::optional<size_t> index_of(const Polynomial& p) const;

private:
    std::vector<Polynomial> gens_;
};

using DenominatorSetPtr = std::shared_ptr<const DenominatorSet>;

// numerator / (formal product of generator powers).
class LocalizedClass {
public:
    LocalizedClass() = default;
    LocalizedClass(DenominatorSetPtr dens, Polynomial numerator,
                   std::vector<Integer> exponents);
    static LocalizedClass from_polynomial(DenominatorSetPtr dens, Polynomial p);

    const Polynomial& numerator() const { return num_; }
    const std::vector<Integer>& exponents() const { return exps_; }
    const DenominatorSetPtr& denominator_set() const { return dens_; }
    Polynomial denominator_polynomial() const;
    bool is_zero() const { return num_.is_zero(); }

    LocalizedClass operator+(const LocalizedClass& o) const;
    LocalizedClass operator*(const LocalizedClass& o) const;

    // cross-multiplied equality a*t == b*s; valid across denominator sets
    bool eq(const LocalizedClass& o) const;

    // cancel generators by exact division, in declared order
    LocalizedClass normalized() const;

    std::string str() const;
    std::string denominator_str() const;  // "1" when empty

private:
    DenominatorSetPtr dens_;
    Polynomial num_;
    std::vector<Integer> exps_;
};

}  // namespace proalg
