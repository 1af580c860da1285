#include "proalg/ring.hpp"

#include <algorithm>
#include <sstream>

namespace proalg {

const std::string kReservedU = "u";
const std::string kReservedV = "v";
const std::string kAffineLineAtom = "L";

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::map<std::string, int> exps) : exps_(std::move(exps)) {
    for (auto it = exps_.begin(); it != exps_.end();) {
        if (it->second == 0) {
            it = exps_.erase(it);
        } else if (it->second < 0) {
            throw Error("monomial exponent must be positive: " + it->first);
        } else {
            ++it;
        }
    }
}

Monomial Monomial::atom(const std::string& name, int power) {
    return Monomial({{name, power}});
}

int Monomial::degree() const {
    int d = 0;
    for (const auto& [_, e] : exps_) d += e;
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r = *this;
    for (const auto& [name, e] : o.exps_) r.exps_[name] += e;
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    for (const auto& [name, e] : exps_) {
        auto it = o.exps_.find(name);
        if (it == o.exps_.end() || it->second < e) return false;
    }
    return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
    Monomial r;
    r.exps_ = o.exps_;
    for (const auto& [name, e] : exps_) {
        int left = r.exps_[name] - e;
        if (left < 0) throw Error("monomial does not divide");
        if (left == 0)
            r.exps_.erase(name);
        else
            r.exps_[name] = left;
    }
    return r;
}

bool Monomial::operator<(const Monomial& o) const {
    int da = degree(), db = o.degree();
    if (da != db) return da > db;  // higher degree prints first
    // ties: lexicographic on exponent vectors over atom names ascending,
    // larger exponent at the first differing name first
    auto a = exps_.begin();
    auto b = o.exps_.begin();
    for (; a != exps_.end() && b != o.exps_.end(); ++a, ++b) {
        if (a->first != b->first) return a->first < b->first;
        if (a->second != b->second) return a->second > b->second;
    }
    return false;  // equal degree forces both ends here only when equal
}

std::string Monomial::str() const {
    if (exps_.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, e] : exps_) {
        if (!first) out << "*";
        first = false;
        out << name;
        if (e != 1) out << "^" << e;
    }
    return out.str();
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(Integer c) {
    Polynomial p;
    if (c != 0) p.terms_[Monomial()] = c;
    return p;
}

Polynomial Polynomial::atom(const std::string& name, int power) {
    Polynomial p;
    p.terms_[Monomial::atom(name, power)] = 1;
    return p;
}

Polynomial Polynomial::term(Integer coeff, Monomial m) {
    Polynomial p;
    if (coeff != 0) p.terms_[std::move(m)] = coeff;
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Integer Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw Error("polynomial is not constant: " + str());
    return terms_.begin()->second;
}

bool Polynomial::is_signed_monomial() const {
    return terms_.size() == 1 &&
           (terms_.begin()->second == 1 || terms_.begin()->second == -1);
}

std::set<std::string> Polynomial::atoms() const {
    std::set<std::string> names;
    for (const auto& [m, _] : terms_)
        for (const auto& [name, e] : m.exponents()) names.insert(name);
    return names;
}

int Polynomial::degree() const {
    // terms are kept in graded order, so the first one is maximal
    return terms_.empty() ? 0 : terms_.begin()->first.degree();
}

void Polynomial::add_term(const Monomial& m, Integer c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (c != 0) terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::pow(int n) const {
    if (n < 0) throw Error("negative power");
    Polynomial r = constant(1);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Integer a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (m.is_unit()) {
            out << a;
        } else {
            if (a != 1) out << a << "*";
            out << m.str();
        }
    }
    return out.str();
}

std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("division by the zero polynomial");
    Polynomial rem = a;
    Polynomial quot;
    const auto& lead_b = *b.terms().begin();
    while (!rem.is_zero()) {
        const auto& lead_r = *rem.terms().begin();
        if (!lead_b.first.divides(lead_r.first)) return std::nullopt;
        if (lead_r.second % lead_b.second != 0) return std::nullopt;
        Polynomial t = Polynomial::term(lead_r.second / lead_b.second,
                                        lead_b.first.quotient_of(lead_r.first));
        quot += t;
        rem = rem - t * b;
    }
    return quot;
}

// ----------------------------------------------------------- EvaluationMap

void EvaluationMap::assign(const std::string& atom, Polynomial value) {
    assign_[atom] = std::move(value);
}

Polynomial EvaluationMap::operator()(const Polynomial& p) const {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        Polynomial t = Polynomial::constant(c);
        for (const auto& [name, e] : m.exponents()) {
            auto it = assign_.find(name);
            if (it == assign_.end()) throw Error("unassigned atom: " + name);
            t = t * it->second.pow(e);
        }
        out += t;
    }
    return out;
}

// --------------------------------------------------------------- AtomTable

AtomTable::AtomTable() {
    Atom line;
    line.name = kAffineLineAtom;
    line.euler = 1;
    line.hodge = Polynomial::atom(kReservedU) * Polynomial::atom(kReservedV);
    atoms_.push_back(std::move(line));
}

void AtomTable::declare(Atom a) {
    if (a.name.empty()) throw Error("atom name must be nonempty");
    if (a.name == kReservedU || a.name == kReservedV)
        throw Error("atom name is reserved for Hodge targets: " + a.name);
    if (a.hodge) {
        for (const auto& name : a.hodge->atoms())
            if (name != kReservedU && name != kReservedV)
                throw Error("hodge polynomial of " + a.name +
                            " mentions a non-reserved atom: " + name);
        Polynomial at11 = specialize_hodge(*a.hodge, Polynomial::constant(1),
                                           Polynomial::constant(1));
        if (at11 != Polynomial::constant(a.euler))
            throw Error("hodge of " + a.name + " at (1,1) is " + at11.str() +
                        ", expected euler = " + std::to_string(a.euler));
    }
    for (auto& existing : atoms_) {
        if (existing.name != a.name) continue;
        if (a.name == kAffineLineAtom) {
            existing = std::move(a);  // override the default for L
            return;
        }
        throw Error("duplicate atom: " + a.name);
    }
    atoms_.push_back(std::move(a));
}

bool AtomTable::has(const std::string& name) const {
    for (const auto& a : atoms_)
        if (a.name == name) return true;
    return false;
}

const Atom& AtomTable::get(const std::string& name) const {
    for (const auto& a : atoms_)
        if (a.name == name) return a;
    throw Error("unknown atom: " + name);
}

EvaluationMap AtomTable::euler_map() const {
    EvaluationMap e;
    for (const auto& a : atoms_) e.assign(a.name, Polynomial::constant(a.euler));
    return e;
}

EvaluationMap AtomTable::hodge_map() const {
    EvaluationMap h;
    for (const auto& a : atoms_)
        if (a.hodge) h.assign(a.name, *a.hodge);
    return h;
}

Polynomial specialize_hodge(const Polynomial& p_in_uv, const Polynomial& u_val,
                            const Polynomial& v_val) {
    for (const auto& name : p_in_uv.atoms())
        if (name != kReservedU && name != kReservedV)
            throw Error("polynomial is not in the reserved variables u, v: " + name);
    EvaluationMap s;
    s.assign(kReservedU, u_val);
    s.assign(kReservedV, v_val);
    return s(p_in_uv);
}

// ---------------------------------------------------------- DenominatorSet

DenominatorSet::DenominatorSet(std::vector<Polynomial> generators)
    : gens_(std::move(generators)) {
    for (const auto& g : gens_)
        if (g.is_zero()) throw Error("zero denominator generator");
}

std::optional<size_t> DenominatorSet::index_of(const Polynomial& p) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i] == p) return i;
    return std::nullopt;
}

// ----------------------------------------------------------- LocalizedClass

LocalizedClass::LocalizedClass(DenominatorSetPtr dens, Polynomial numerator,
                               std::vector<Integer> exponents)
    : dens_(std::move(dens)), num_(std::move(numerator)), exps_(std::move(exponents)) {
    if (!dens_) throw Error("localized class without a denominator set");
    if (exps_.size() != dens_->size())
        throw Error("exponent vector does not match the denominator set");
    for (Integer e : exps_)
        if (e < 0) throw Error("negative denominator exponent");
}

LocalizedClass LocalizedClass::from_polynomial(DenominatorSetPtr dens, Polynomial p) {
    std::vector<Integer> exps(dens->size(), 0);
    return LocalizedClass(std::move(dens), std::move(p), std::move(exps));
}

Polynomial LocalizedClass::denominator_polynomial() const {
    Polynomial d = Polynomial::constant(1);
    for (size_t i = 0; i < exps_.size(); ++i)
        d = d * dens_->generator(i).pow(static_cast<int>(exps_[i]));
    return d;
}

LocalizedClass LocalizedClass::operator+(const LocalizedClass& o) const {
    if (dens_ != o.dens_ && !(dens_ && o.dens_ &&
                              dens_->generators() == o.dens_->generators()))
        throw Error("fraction addition across different denominator sets");
    std::vector<Integer> exps(dens_->size());
    Polynomial a = num_, b = o.num_;
    for (size_t i = 0; i < exps.size(); ++i) {
        exps[i] = std::max(exps_[i], o.exps_[i]);
        a = a * dens_->generator(i).pow(static_cast<int>(exps[i] - exps_[i]));
        b = b * dens_->generator(i).pow(static_cast<int>(exps[i] - o.exps_[i]));
    }
    return LocalizedClass(dens_, a + b, std::move(exps));
}

LocalizedClass LocalizedClass::operator*(const LocalizedClass& o) const {
    if (dens_ != o.dens_ && !(dens_ && o.dens_ &&
                              dens_->generators() == o.dens_->generators()))
        throw Error("fraction product across different denominator sets");
    std::vector<Integer> exps(dens_->size());
    for (size_t i = 0; i < exps.size(); ++i) exps[i] = exps_[i] + o.exps_[i];
    return LocalizedClass(dens_, num_ * o.num_, std::move(exps));
}

bool LocalizedClass::eq(const LocalizedClass& o) const {
    return num_ * o.denominator_polynomial() == o.num_ * denominator_polynomial();
}

LocalizedClass LocalizedClass::normalized() const {
    Polynomial n = num_;
    std::vector<Integer> exps = exps_;
    if (n.is_zero()) {
        std::fill(exps.begin(), exps.end(), 0);
        return LocalizedClass(dens_, std::move(n), std::move(exps));
    }
    for (size_t i = 0; i < exps.size(); ++i) {
        while (exps[i] > 0) {
            auto q = exact_divide(n, dens_->generator(i));
            if (!q) break;
            n = *q;
            --exps[i];
        }
    }
    return LocalizedClass(dens_, std::move(n), std::move(exps));
}

std::string LocalizedClass::denominator_str() const {
    std::ostringstream out;
    bool any = false;
    for (size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] == 0) continue;
        if (any) out << "*";
        any = true;
        const Polynomial& g = dens_->generator(i);
        bool wrap = g.terms().size() > 1;
        if (wrap) out << "(";
        out << g.str();
        if (wrap) out << ")";
        if (exps_[i] != 1) out << "^" << exps_[i];
    }
    return any ? out.str() : "1";
}

std::string LocalizedClass::str() const {
    bool trivial_den = true;
    for (Integer e : exps_)
        if (e != 0) trivial_den = false;
    std::string n = num_.str();
    if (trivial_den) return n;
    if (num_.terms().size() > 1) n = "(" + n + ")";
    return n + " / " + denominator_str();
}

}  // namespace proalg
