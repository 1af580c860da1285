#include "proalg/model_file.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace proalg {

namespace {

enum class Tok { ident, integer, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Integer value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, tok_.line, tok_.col);
    }

private:
    void next() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++col_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Tok::end;
            tok_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                advance();
            tok_.kind = Tok::ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
            tok_.kind = Tok::integer;
            tok_.text = text_.substr(start, pos_ - start);
            try {
                tok_.value = std::stoll(tok_.text);
            } catch (const std::exception&) {
                throw ParseError("integer out of range: " + tok_.text, tok_.line, tok_.col);
            }
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            tok_.kind = Tok::punct;
            tok_.text = "->";
            advance();
            advance();
            return;
        }
        static const std::string puncts = "{};:=,[]+-*^";
        if (puncts.find(c) != std::string::npos) {
            tok_.kind = Tok::punct;
            tok_.text = std::string(1, c);
            advance();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void advance() {
        ++pos_;
        ++col_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

bool is_punct(const Token& t, const char* p) {
    return t.kind == Tok::punct && t.text == p;
}

class Parser {
public:
    explicit Parser(const std::string& text) : lx_(text) {}

    Lexer lx_;

    std::string expect_ident(const char* what) {
        if (lx_.peek().kind != Tok::ident)
            lx_.fail(std::string("expected ") + what + ", got '" + lx_.peek().text + "'");
        return lx_.take().text;
    }

    Integer expect_int(const char* what) {
        bool neg = false;
        if (is_punct(lx_.peek(), "-")) {
            lx_.take();
            neg = true;
        }
        if (lx_.peek().kind != Tok::integer)
            lx_.fail(std::string("expected ") + what);
        Integer v = lx_.take().value;
        return neg ? -v : v;
    }

    void expect_punct(const char* p) {
        if (!is_punct(lx_.peek(), p))
            lx_.fail(std::string("expected '") + p + "', got '" + lx_.peek().text + "'");
        lx_.take();
    }

    void expect_keyword(const char* kw) {
        if (lx_.peek().kind != Tok::ident || lx_.peek().text != kw)
            lx_.fail(std::string("expected '") + kw + "'");
        lx_.take();
    }

    void expect_key(const char* key) {
        expect_keyword(key);
        expect_punct("=");
    }

    bool accept_key(const char* key) {
        if (lx_.peek().kind == Tok::ident && lx_.peek().text == key) {
            lx_.take();
            expect_punct("=");
            return true;
        }
        return false;
    }

    // poly := ['-'] term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    // factor := INT | IDENT ['^' INT].  Stops at the first token that
    // cannot continue a polynomial.
    Polynomial parse_poly() {
        Polynomial p;
        bool negative = false;
        if (is_punct(lx_.peek(), "-")) {
            lx_.take();
            negative = true;
        }
        p = p + parse_term(negative);
        while (is_punct(lx_.peek(), "+") || is_punct(lx_.peek(), "-")) {
            bool neg = lx_.take().text == "-";
            p = p + parse_term(neg);
        }
        return p;
    }

    Polynomial parse_term(bool negative) {
        Polynomial t = parse_factor();
        while (is_punct(lx_.peek(), "*")) {
            lx_.take();
            t = t * parse_factor();
        }
        return negative ? -t : t;
    }

    Polynomial parse_factor() {
        if (lx_.peek().kind == Tok::integer) return Polynomial::constant(lx_.take().value);
        if (lx_.peek().kind == Tok::ident) {
            std::string name = lx_.take().text;
            int power = 1;
            if (is_punct(lx_.peek(), "^")) {
                lx_.take();
                if (lx_.peek().kind != Tok::integer || lx_.peek().value <= 0)
                    lx_.fail("expected a positive integer power");
                power = static_cast<int>(lx_.take().value);
            }
            return Polynomial::atom(name, power);
        }
        lx_.fail("expected a polynomial");
    }

    std::vector<std::string> parse_ident_list() {
        std::vector<std::string> out;
        expect_punct("[");
        if (!is_punct(lx_.peek(), "]")) {
            out.push_back(expect_ident("name"));
            while (is_punct(lx_.peek(), ",")) {
                lx_.take();
                out.push_back(expect_ident("name"));
            }
        }
        expect_punct("]");
        return out;
    }

    std::vector<Polynomial> parse_poly_list() {
        std::vector<Polynomial> out;
        expect_punct("[");
        if (!is_punct(lx_.peek(), "]")) {
            out.push_back(parse_poly());
            while (is_punct(lx_.peek(), ",")) {
                lx_.take();
                out.push_back(parse_poly());
            }
        }
        expect_punct("]");
        return out;
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
    Parser p(text);
    Polynomial poly = p.parse_poly();
    if (p.lx_.peek().kind != Tok::end)
        p.lx_.fail("trailing input after polynomial: '" + p.lx_.peek().text + "'");
    return poly;
}

bool FunctionDecl::integer_valued() const {
    for (const auto& [_, v] : values)
        if (!v.is_constant()) return false;
    return true;
}

ModelFile ModelFile::parse(const std::string& text) {
    ModelFile mf;
    Parser p(text);
    auto table = std::make_shared<AtomTable>();

    auto resolve_variety = [&](const std::string& name, const Token& at) {
        auto it = mf.varieties_.find(name);
        if (it == mf.varieties_.end())
            throw ParseError("unknown variety: " + name, at.line, at.col);
        return it->second;
    };

    while (p.lx_.peek().kind != Tok::end) {
        Token head = p.lx_.peek();
        if (head.kind != Tok::ident) p.lx_.fail("expected a block keyword");
        std::string kw = p.lx_.take().text;

        if (kw == "atom") {
            AtomDecl d;
            d.name = p.expect_ident("atom name");
            p.expect_key("euler");
            d.euler = p.expect_int("euler value");
            if (p.accept_key("hodge")) d.hodge = p.parse_poly();
            try {
                Atom a;
                a.name = d.name;
                a.euler = d.euler;
                a.hodge = d.hodge;
                table->declare(std::move(a));
            } catch (const Error& e) {
                throw ParseError(e.what(), head.line, head.col);
            }
            mf.atom_decls_.push_back(std::move(d));
        } else if (kw == "variety") {
            std::string name = p.expect_ident("variety name");
            if (mf.varieties_.count(name))
                throw ParseError("duplicate variety: " + name, head.line, head.col);
            std::optional<int> smooth;
            if (p.accept_key("smooth")) smooth = static_cast<int>(p.expect_int("dimension"));
            p.expect_punct("{");
            std::vector<Stratum> strata;
            while (!is_punct(p.lx_.peek(), "}")) {
                Stratum s;
                s.id = p.expect_ident("stratum id");
                p.expect_key("class");
                s.cls = p.parse_poly();
                p.expect_key("component");
                s.component = p.expect_ident("component label");
                strata.push_back(std::move(s));
                if (is_punct(p.lx_.peek(), ";")) p.lx_.take();
            }
            p.expect_punct("}");
            mf.varieties_[name] =
                std::make_shared<VarietyModel>(name, std::move(strata), table, smooth);
            mf.variety_order_.push_back(name);
        } else if (kw == "morphism") {
            std::string name = p.expect_ident("morphism name");
            if (mf.morphisms_.count(name))
                throw ParseError("duplicate morphism: " + name, head.line, head.col);
            p.expect_punct(":");
            Token src_at = p.lx_.peek();
            std::string src = p.expect_ident("source variety");
            p.expect_punct("->");
            Token dst_at = p.lx_.peek();
            std::string dst = p.expect_ident("target variety");
            p.expect_punct("{");
            std::map<std::string, MorphismModel::Leg> legs;
            while (!is_punct(p.lx_.peek(), "}")) {
                std::string from = p.expect_ident("source stratum");
                p.expect_punct("->");
                std::string to = p.expect_ident("target stratum");
                p.expect_key("fiber");
                Polynomial fiber = p.parse_poly();
                legs[from] = MorphismModel::Leg{to, std::move(fiber)};
                if (is_punct(p.lx_.peek(), ";")) p.lx_.take();
            }
            p.expect_punct("}");
            mf.morphisms_[name] = std::make_shared<MorphismModel>(
                name, resolve_variety(src, src_at), resolve_variety(dst, dst_at),
                std::move(legs));
            mf.morphism_order_.push_back(name);
        } else if (kw == "tower") {
            TowerDecl d;
            d.name = p.expect_ident("tower name");
            p.expect_key("kind");
            d.kind = p.expect_ident("tower kind");
            if (d.kind == "power") {
                p.expect_key("base");
                d.base = p.expect_ident("base variety");
            } else if (d.kind == "arc") {
                p.expect_key("base");
                d.base = p.expect_ident("base variety");
                p.expect_key("dim");
                d.dim = static_cast<int>(p.expect_int("dimension"));
            } else if (d.kind == "sequence") {
                p.expect_key("k");
                d.k = static_cast<int>(p.expect_int("alphabet size"));
            } else if (d.kind == "locally_trivial") {
                p.expect_key("base");
                d.base = p.expect_ident("base variety");
                p.expect_key("fibers");
                d.fibers = p.parse_ident_list();
            } else if (d.kind == "explicit") {
                p.expect_key("levels");
                d.levels = p.parse_ident_list();
                p.expect_key("bonds");
                d.bonds = p.parse_ident_list();
                if (p.accept_key("multipliers"))
                    d.multipliers = p.expect_ident("multiplier block name");
            } else {
                throw ParseError("unknown tower kind: " + d.kind, head.line, head.col);
            }
            for (const auto& existing : mf.tower_decls_)
                if (existing.name == d.name)
                    throw ParseError("duplicate tower: " + d.name, head.line, head.col);
            mf.tower_decls_.push_back(std::move(d));
        } else if (kw == "function") {
            FunctionDecl d;
            d.name = p.expect_ident("function name");
            p.expect_key("on");
            Token at = p.lx_.peek();
            d.on = p.expect_ident("variety name");
            resolve_variety(d.on, at);
            p.expect_punct("{");
            while (!is_punct(p.lx_.peek(), "}")) {
                std::string id = p.expect_ident("stratum id");
                p.expect_punct("=");
                d.values[id] = p.parse_poly();
                if (is_punct(p.lx_.peek(), ";")) p.lx_.take();
            }
            p.expect_punct("}");
            for (const auto& existing : mf.function_decls_)
                if (existing.name == d.name)
                    throw ParseError("duplicate function: " + d.name, head.line, head.col);
            mf.function_decls_.push_back(std::move(d));
        } else if (kw == "multipliers") {
            MultipliersDecl d;
            d.name = p.expect_ident("multiplier block name");
            p.expect_key("steps");
            d.steps = p.parse_poly_list();
            if (p.lx_.peek().kind == Tok::ident && p.lx_.peek().text == "certified") {
                p.lx_.take();
                d.certified = true;
            }
            for (const auto& existing : mf.multiplier_decls_)
                if (existing.name == d.name)
                    throw ParseError("duplicate multipliers: " + d.name, head.line,
                                     head.col);
            mf.multiplier_decls_.push_back(std::move(d));
        } else {
            throw ParseError("unknown block keyword: " + kw, head.line, head.col);
        }
    }

    mf.table_ = table;

    // references inside tower declarations must resolve
    for (const auto& d : mf.tower_decls_) {
        auto need_variety = [&](const std::string& n) {
            if (!mf.varieties_.count(n))
                throw ParseError("tower " + d.name + " references unknown variety " + n, 1, 1);
        };
        if (d.kind == "power" || d.kind == "arc") need_variety(d.base);
        if (d.kind == "locally_trivial") {
            need_variety(d.base);
            for (const auto& f : d.fibers) need_variety(f);
        }
        if (d.kind == "explicit") {
            for (const auto& l : d.levels) need_variety(l);
            for (const auto& b : d.bonds)
                if (!mf.morphisms_.count(b))
                    throw ParseError("tower " + d.name + " references unknown morphism " + b,
                                     1, 1);
            if (!d.multipliers.empty() && !mf.find_multipliers(d.multipliers))
                throw ParseError(
                    "tower " + d.name + " references unknown multipliers " + d.multipliers,
                    1, 1);
        }
    }
    return mf;
}

bool ModelFile::has_variety(const std::string& name) const {
    return varieties_.count(name) != 0;
}

VarietyModelPtr ModelFile::variety(const std::string& name) const {
    auto it = varieties_.find(name);
    if (it == varieties_.end()) throw Error("unknown variety: " + name);
    return it->second;
}

MorphismModelPtr ModelFile::morphism(const std::string& name) const {
    auto it = morphisms_.find(name);
    if (it == morphisms_.end()) throw Error("unknown morphism: " + name);
    return it->second;
}

const TowerDecl& ModelFile::tower_decl(const std::string& name) const {
    for (const auto& d : tower_decls_)
        if (d.name == name) return d;
    throw Error("unknown tower: " + name);
}

const FunctionDecl& ModelFile::function_decl(const std::string& name) const {
    for (const auto& d : function_decls_)
        if (d.name == name) return d;
    throw Error("unknown function: " + name);
}

const MultipliersDecl* ModelFile::find_multipliers(const std::string& name) const {
    for (const auto& d : multiplier_decls_)
        if (d.name == name) return &d;
    return nullptr;
}

TowerPtr ModelFile::instantiate_tower(const std::string& name) const {
    const TowerDecl& d = tower_decl(name);
    if (d.kind == "power") return build_power_tower(variety(d.base));
    if (d.kind == "arc") return build_arc_tower(variety(d.base), d.dim);
    if (d.kind == "sequence") return build_sequence_tower(table_, d.k);
    if (d.kind == "locally_trivial") {
        std::vector<VarietyModelPtr> fibers;
        for (const auto& f : d.fibers) fibers.push_back(variety(f));
        return build_locally_trivial_tower(variety(d.base), fibers);
    }
    // explicit
    std::vector<VarietyModelPtr> levels;
    for (const auto& l : d.levels) levels.push_back(variety(l));
    std::vector<MorphismModelPtr> bonds;
    for (const auto& b : d.bonds) bonds.push_back(morphism(b));
    std::optional<MultiplierSystem> chi_steps, gamma_steps;
    if (!d.multipliers.empty()) {
        const MultipliersDecl* m = find_multipliers(d.multipliers);
        if (m && m->certified) {
            MultiplierSystem ms(m->steps);
            if (ms.integer_steps()) chi_steps = ms;
            gamma_steps = std::move(ms);
        }
    }
    return Tower::from_levels(d.name, std::move(levels), std::move(bonds),
                              std::move(chi_steps), std::move(gamma_steps));
}

ConstructibleFunction ModelFile::constructible(const FunctionDecl& f) const {
    if (!f.integer_valued())
        throw Error("function " + f.name + " has class values, not integers");
    ConstructibleFunction out(variety(f.on));
    for (const auto& [id, v] : f.values) out.set(id, v.constant_value());
    return out;
}

MotivicFunction ModelFile::motivic(const FunctionDecl& f) const {
    MotivicFunction out(variety(f.on));
    for (const auto& [id, v] : f.values) out.set(id, v);
    return out;
}

std::string ModelFile::print() const {
    std::ostringstream out;
    for (const auto& a : atom_decls_) {
        out << "atom " << a.name << " euler=" << a.euler;
        if (a.hodge) out << " hodge=" << a.hodge->str();
        out << "\n";
    }
    for (const auto& name : variety_order_) {
        const VarietyModel& x = *varieties_.at(name);
        out << "variety " << name;
        if (x.smooth_dim()) out << " smooth=" << *x.smooth_dim();
        out << " {\n";
        for (const auto& s : x.strata())
            out << "    " << s.id << " class=" << s.cls.str() << " component="
                << s.component << ";\n";
        out << "}\n";
    }
    for (const auto& name : morphism_order_) {
        const MorphismModel& f = *morphisms_.at(name);
        out << "morphism " << name << " : " << f.source()->name() << " -> "
            << f.target()->name() << " {\n";
        for (const auto& [from, leg] : f.legs())
            out << "    " << from << " -> " << leg.target_id
                << " fiber=" << leg.fiber_class.str() << ";\n";
        out << "}\n";
    }
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ",";
            s += xs[i];
        }
        return s;
    };
    for (const auto& d : tower_decls_) {
        out << "tower " << d.name << " kind=" << d.kind;
        if (d.kind == "power") out << " base=" << d.base;
        if (d.kind == "arc") out << " base=" << d.base << " dim=" << d.dim;
        if (d.kind == "sequence") out << " k=" << d.k;
        if (d.kind == "locally_trivial")
            out << " base=" << d.base << " fibers=[" << join(d.fibers) << "]";
        if (d.kind == "explicit") {
            out << " levels=[" << join(d.levels) << "] bonds=[" << join(d.bonds) << "]";
            if (!d.multipliers.empty()) out << " multipliers=" << d.multipliers;
        }
        out << "\n";
    }
    for (const auto& d : function_decls_) {
        out << "function " << d.name << " on=" << d.on << " {\n";
        for (const auto& [id, v] : d.values)
            out << "    " << id << " = " << v.str() << ";\n";
        out << "}\n";
    }
    for (const auto& d : multiplier_decls_) {
        out << "multipliers " << d.name << " steps=[";
        for (size_t i = 0; i < d.steps.size(); ++i) {
            if (i) out << ",";
            out << d.steps[i].str();
        }
        out << "]";
        if (d.certified) out << " certified";
        out << "\n";
    }
    return out.str();
}

bool ModelFile::operator==(const ModelFile& o) const {
    if (atom_decls_ != o.atom_decls_) return false;
    if (variety_order_ != o.variety_order_ || morphism_order_ != o.morphism_order_)
        return false;
    for (const auto& name : variety_order_) {
        const VarietyModel& a = *varieties_.at(name);
        const VarietyModel& b = *o.varieties_.at(name);
        if (a.smooth_dim() != b.smooth_dim()) return false;
        if (a.strata().size() != b.strata().size()) return false;
        for (size_t i = 0; i < a.strata().size(); ++i) {
            const Stratum& s = a.strata()[i];
            const Stratum& t = b.strata()[i];
            if (s.id != t.id || s.cls != t.cls || s.component != t.component) return false;
        }
    }
    for (const auto& name : morphism_order_) {
        const MorphismModel& a = *morphisms_.at(name);
        const MorphismModel& b = *o.morphisms_.at(name);
        if (a.source()->name() != b.source()->name()) return false;
        if (a.target()->name() != b.target()->name()) return false;
        if (a.legs().size() != b.legs().size()) return false;
        for (const auto& [from, leg] : a.legs()) {
            auto it = b.legs().find(from);
            if (it == b.legs().end()) return false;
            if (leg.target_id != it->second.target_id ||
                leg.fiber_class != it->second.fiber_class)
                return false;
        }
    }
    return tower_decls_ == o.tower_decls_ && function_decls_ == o.function_decls_ &&
           multiplier_decls_ == o.multiplier_decls_;
}

ValidationReport check_model_file(const ModelFile& mf) {
    ValidationReport r;
    auto absorb = [&r](const ValidationReport& o) {
        r.violations.insert(r.violations.end(), o.violations.begin(), o.violations.end());
    };

    for (const auto& name : mf.variety_order()) absorb(mf.variety(name)->validate());
    for (const auto& name : mf.morphism_order()) absorb(mf.morphism(name)->validate());

    for (const auto& d : mf.multiplier_decls()) {
        for (size_t i = 0; i < d.steps.size(); ++i)
            if (d.steps[i].is_zero())
                r.violations.push_back("multipliers " + d.name + ": zero multiplier at step " +
                                       std::to_string(i));
    }

    for (const auto& d : mf.function_decls()) {
        VarietyModelPtr x = mf.variety(d.on);
        for (const auto& [id, _] : d.values)
            if (!x->has_stratum(id))
                r.violations.push_back("function " + d.name + ": unknown stratum " + id);
    }

    for (const auto& d : mf.tower_decls()) {
        try {
            TowerPtr tw = mf.instantiate_tower(d.name);
            int probe = tw->depth() ? *tw->depth() : 3;
            absorb(validate_tower(*tw, probe));
            // a certified multiplier link must match the bonds it governs
            if (d.kind == "explicit" && !d.multipliers.empty()) {
                const MultipliersDecl* m = mf.find_multipliers(d.multipliers);
                if (m && m->certified) {
                    bool any_zero = false;
                    for (const auto& s : m->steps) any_zero = any_zero || s.is_zero();
                    if (any_zero) continue;  // already reported above
                    MultiplierSystem ms(m->steps);
                    int nbonds = static_cast<int>(d.bonds.size());
                    for (int n = 0; n < nbonds && n < static_cast<int>(m->steps.size()); ++n) {
                        auto got = bond_multiplier(*tw->bond(n), CharKind::gamma);
                        if (!got || *got != ms.step(n))
                            r.violations.push_back("tower " + d.name +
                                                   ": certified multiplier step " +
                                                   std::to_string(n) + " fails certification");
                    }
                }
            }
        } catch (const Error& e) {
            r.violations.push_back("tower " + d.name + ": " + e.what());
        }
    }

    // base change on the fiber squares of declared morphism pairs with a
    // common target
    const auto& names = mf.morphism_order();
    for (size_t i = 0; i < names.size(); ++i) {
        for (size_t j = i; j < names.size(); ++j) {
            MorphismModelPtr f = mf.morphism(names[i]);
            MorphismModelPtr g = mf.morphism(names[j]);
            if (f->target() != g->target()) continue;
            if (!f->validate().ok() || !g->validate().ok()) continue;
            FiberSquare sq = fiber_square(*f, *g);
            ConstructibleFunction alpha = ConstructibleFunction::unit(f->source());
            ConstructibleFunction lhs = pullback(*g, pushforward(*f, alpha));
            ConstructibleFunction rhs = pushforward(*sq.pr_y, pullback(*sq.pr_x, alpha));
            if (lhs != rhs)
                r.violations.push_back("base change fails for the fiber square of " +
                                       names[i] + " and " + names[j]);
        }
    }
    return r;
}

}  // namespace proalg
