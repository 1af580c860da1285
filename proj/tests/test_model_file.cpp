#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "proalg/model_file.hpp"

using namespace proalg;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const char* kCover = R"(
atom M euler=3 hodge=1 + u*v + u^2*v^2
variety X0 {
    t0 class=1 component=c0;
}
variety X1 {
    s0 class=1 component=c0;
    s1 class=1 component=c0;
}
morphism b0 : X1 -> X0 {
    s0 -> t0 fiber=1;
    s1 -> t0 fiber=1;
}
multipliers MS steps=[2] certified
tower TEX kind=explicit levels=[X0,X1] bonds=[b0] multipliers=MS
function one on=X0 {
    t0 = 1;
}
)";

}  // namespace

TEST_CASE("parse_polynomial round trips") {
    for (const char* s : {"0", "L^2 + 2*L + 1", "-3*L^2*M + M - 7", "u*v", "42"}) {
        Polynomial p = parse_polynomial(s);
        CHECK(parse_polynomial(p.str()) == p);
        CHECK(p.str() == s);
    }
    CHECK_THROWS_AS(parse_polynomial("L^0"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("L^-1"), ParseError);
    CHECK_THROWS_AS(parse_polynomial("L + "), ParseError);
    CHECK_THROWS_AS(parse_polynomial("2 3"), ParseError);
    CHECK_THROWS_AS(parse_polynomial(""), ParseError);
    CHECK(parse_polynomial("- 2*L") == Polynomial::constant(-2) * Polynomial::atom("L"));
}

TEST_CASE("parsing the explicit cover") {
    ModelFile mf = ModelFile::parse(kCover);
    CHECK(mf.atom_decls().size() == 1);
    CHECK(mf.atoms()->get("M").euler == 3);
    CHECK(mf.atoms()->has("L"));
    CHECK(mf.variety("X1")->strata().size() == 2);
    CHECK(mf.morphism("b0")->validate().ok());
    CHECK(mf.tower_decl("TEX").kind == "explicit");
    CHECK(mf.function_decl("one").integer_valued());
    REQUIRE(mf.find_multipliers("MS"));
    CHECK(mf.find_multipliers("MS")->certified);

    TowerPtr tw = mf.instantiate_tower("TEX");
    CHECK(tw->depth() == 1);
    REQUIRE(tw->gamma_multipliers());
    CHECK(tw->gamma_multipliers()->step(0) == Polynomial::constant(2));

    IndFunction<ConstructibleFunction> f{
        tw, TransitionSystem<ConstructibleFunction>::plain(), 0,
        mf.constructible(mf.function_decl("one"))};
    auto v = pro_characteristic(f, *tw->chi_multipliers(), CharKind::euler);
    CHECK(v.normalized().str() == "1");
}

TEST_CASE("round trip: parse, print, parse") {
    ModelFile mf = ModelFile::parse(kCover);
    ModelFile again = ModelFile::parse(mf.print());
    CHECK(mf == again);
    CHECK(mf.print() == again.print());
}

TEST_CASE("round trip on every bundled demo") {
    std::filesystem::path dir(DEMO_DIR);
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".model") continue;
        ++seen;
        CAPTURE(entry.path().string());
        ModelFile mf = ModelFile::parse(slurp(entry.path()));
        ModelFile again = ModelFile::parse(mf.print());
        CHECK(mf == again);
        CHECK(check_model_file(mf).ok());
    }
    CHECK(seen >= 6);
}

TEST_CASE("parse errors carry line and column") {
    CHECK_THROWS_AS(ModelFile::parse("widget W"), ParseError);
    CHECK_THROWS_AS(ModelFile::parse("morphism f : A -> B { }"), ParseError);
    CHECK_THROWS_AS(ModelFile::parse("tower T kind=power base=NOPE"), ParseError);
    CHECK_THROWS_AS(ModelFile::parse("atom u euler=1"), ParseError);

    try {
        ModelFile::parse("variety X {\n  a klass=1 component=c;\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("check reports violations") {
    // local triviality broken: fiber says L but the classes say 1
    const char* bad = R"(
variety X0 {
    t0 class=1 component=c0;
}
variety X1 {
    s0 class=1 component=c0;
}
morphism b0 : X1 -> X0 {
    s0 -> t0 fiber=L;
}
)";
    auto rep = check_model_file(ModelFile::parse(bad));
    REQUIRE(!rep.ok());
    CHECK(rep.str().find("local triviality") != std::string::npos);

    const char* zero = R"(
multipliers MS steps=[L,0]
)";
    auto zrep = check_model_file(ModelFile::parse(zero));
    REQUIRE(!zrep.ok());
    CHECK(zrep.str().find("zero multiplier") != std::string::npos);

    // certified multipliers that do not match the bonds they govern
    const char* uncert = R"(
variety X0 {
    t0 class=1 component=c0;
}
variety X1 {
    s0 class=1 component=c0;
    s1 class=1 component=c0;
}
morphism b0 : X1 -> X0 {
    s0 -> t0 fiber=1;
    s1 -> t0 fiber=1;
}
multipliers MS steps=[3] certified
tower TEX kind=explicit levels=[X0,X1] bonds=[b0] multipliers=MS
)";
    auto crep = check_model_file(ModelFile::parse(uncert));
    REQUIRE(!crep.ok());
    CHECK(crep.str().find("certification") != std::string::npos);

    // an arc tower without the smoothness flag
    const char* arcbad = R"(
variety A1 {
    a class=L component=c0;
}
tower T kind=arc base=A1 dim=1
)";
    auto arep = check_model_file(ModelFile::parse(arcbad));
    REQUIRE(!arep.ok());
    CHECK(arep.str().find("smooth") != std::string::npos);

    // the reserved Hodge variables are not classes
    const char* reserved = R"(
variety H {
    a class=u*v component=c0;
}
)";
    auto rrep = check_model_file(ModelFile::parse(reserved));
    REQUIRE(!rrep.ok());
    CHECK(rrep.str().find("undeclared atom u") != std::string::npos);
}

TEST_CASE("the parser survives garbage input") {
    std::mt19937 rng(233);
    const std::string alphabet =
        "abzLMU019 \n\t{}[];:=,+-*^#->_variety atom tower function euler";
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 160);
    for (int i = 0; i < 300; ++i) {
        std::string text;
        int n = len(rng);
        for (int j = 0; j < n; ++j) text += alphabet[pick(rng)];
        try {
            ModelFile mf = ModelFile::parse(text);
            ModelFile again = ModelFile::parse(mf.print());
            CHECK(mf == again);  // whatever parses must round-trip
        } catch (const Error&) {
            // rejection with a diagnostic is fine; crashing is not
        }
    }
}

TEST_CASE("function declarations distinguish integer and class values") {
    const char* text = R"(
variety X {
    a class=1 component=c;
    b class=L component=c;
}
function f on=X {
    a = 2;
    b = -1;
}
function g on=X {
    a = L;
}
)";
    ModelFile mf = ModelFile::parse(text);
    CHECK(mf.function_decl("f").integer_valued());
    CHECK(!mf.function_decl("g").integer_valued());
    auto cf = mf.constructible(mf.function_decl("f"));
    CHECK(cf.at("a") == 2);
    CHECK(cf.at("b") == -1);
    CHECK_THROWS_AS(mf.constructible(mf.function_decl("g")), Error);
    auto m = mf.motivic(mf.function_decl("g"));
    CHECK(m.at("a") == Polynomial::atom("L"));
}

TEST_CASE("base change runs on declared morphism pairs with a common target") {
    const char* text = R"(
variety Z {
    z class=1 component=c;
}
variety X {
    x0 class=L component=c;
    x1 class=1 component=c;
}
variety Y {
    y0 class=2 component=c;
}
morphism f : X -> Z {
    x0 -> z fiber=L;
    x1 -> z fiber=1;
}
morphism g : Y -> Z {
    y0 -> z fiber=2;
}
)";
    CHECK(check_model_file(ModelFile::parse(text)).ok());
}
