// Acceptance suite.  Runs every acceptance criterion at its stated
// tolerance (all exact) and prints one pass/fail line per criterion.
//
// usage: acceptance [path-to-cli] [path-to-demo-dir]

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "proalg/model_file.hpp"
#include "proalg/towers.hpp"

using namespace proalg;
using namespace proalg::testgen;

namespace {

Polynomial C(Integer n) { return Polynomial::constant(n); }
Polynomial L(int p = 1) { return Polynomial::atom("L", p); }

struct CriterionFailure {
    std::string reason;
};

void require(bool cond, const std::string& reason) {
    if (!cond) throw CriterionFailure{reason};
}

class Runner {
public:
    void run(int number, const std::string& title, double budget_seconds,
             const std::function<void()>& body) {
        auto start = std::chrono::steady_clock::now();
        std::string reason;
        bool ok = true;
        try {
            body();
        } catch (const CriterionFailure& f) {
            ok = false;
            reason = f.reason;
        } catch (const std::exception& e) {
            ok = false;
            reason = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (ok && budget_seconds > 0 && elapsed > budget_seconds) {
            ok = false;
            reason = "exceeded the time budget of " + std::to_string(budget_seconds) +
                     " s (took " + std::to_string(elapsed) + " s)";
        }
        std::printf("%s criterion %2d: %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", number,
                    title.c_str(), elapsed, ok ? "" : " -- ", reason.c_str());
        if (!ok) ++failures;
    }

    int failures = 0;
};

struct CmdResult {
    int status = -1;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string first_line(const std::string& s) {
    auto pos = s.find('\n');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

IndFunction<ConstructibleFunction> plain_rep(const TowerPtr& tw, int level,
                                             ConstructibleFunction value) {
    return IndFunction<ConstructibleFunction>{
        tw, TransitionSystem<ConstructibleFunction>::plain(), level, std::move(value)};
}

// Independent colimit oracle for criterion 11: lift the representative to
// the top level by a direct per-stratum walk (not ind_lift), evaluate the
// characteristic by a direct sum, and put the full multiplier product in
// the denominator.
ConstructibleFunction naive_step(const MorphismModel& bond,
                                 const ConstructibleFunction& v) {
    ConstructibleFunction out(bond.source());
    for (const auto& s : bond.source()->strata())
        out.set(s.id, v.at(bond.target_of(s.id)));
    return out;
}

Integer naive_chi(const ConstructibleFunction& v) {
    Integer total = 0;
    EvaluationMap eps = v.model()->atom_table()->euler_map();
    for (const auto& s : v.model()->strata())
        total += v.at(s.id) * eps(s.cls).constant_value();
    return total;
}

Polynomial naive_gamma(const ConstructibleFunction& v) {
    Polynomial total;
    for (const auto& s : v.model()->strata())
        total += Polynomial::constant(v.at(s.id)) * s.cls;
    return total;
}

LocalizedClass oracle_fraction(const TowerPtr& tw, int level,
                               const ConstructibleFunction& value,
                               const MultiplierSystem& P, CharKind kind) {
    int top = *tw->depth();
    ConstructibleFunction lifted = value;
    for (int n = level; n < top; ++n) lifted = naive_step(*tw->bond(n), lifted);
    Polynomial num = kind == CharKind::euler ? Polynomial::constant(naive_chi(lifted))
                                             : naive_gamma(lifted);
    std::vector<Integer> exps(P.denominators()->size(), 0);
    for (int i = 0; i < top; ++i) ++exps[*P.denominators()->index_of(P.step(i))];
    return LocalizedClass(P.denominators(), num, std::move(exps));
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    std::string demo_dir = argc > 2 ? argv[2] : "demos";
    Runner r;
    auto table = standard_table();

    r.run(1, "power tower of the projective line has chi-ind 2 at levels 0-5", 1.0, [&] {
        auto tower = build_power_tower(p1_model(table));
        for (int k = 0; k <= 5; ++k) {
            auto one = plain_rep(tower, k, ConstructibleFunction::unit(tower->level(k)));
            auto v = pro_characteristic(one, *tower->chi_multipliers(), CharKind::euler);
            require(v.eq(LocalizedClass::from_polynomial(v.denominator_set(), C(2))),
                    "level " + std::to_string(k) + " gave " + v.normalized().str());
            require(v.normalized().str() == "2", "canonical string is not 2");
        }
    });

    r.run(2,
          "arc-tower measures are level-independent (L, L^2, L+1) and sub-cylinders "
          "keep the exact numerator",
          1.0, [&] {
              struct Case {
                  VarietyModelPtr base;
                  int d;
                  Polynomial expect;
              };
              std::vector<Case> cases{{a1_model(table), 1, L()},
                                      {a2_model(table), 2, L(2)},
                                      {p1_model(table), 1, C(1) + L()}};
              for (const auto& c : cases) {
                  auto tw = build_arc_tower(c.base, c.d);
                  for (int n = 0; n <= 5; ++n) {
                      auto m =
                          motivic_measure(tw, n, ConstructibleSet::full(*tw->level(n)));
                      require(m.eq(LocalizedClass::from_polynomial(m.denominator_set(),
                                                                   c.expect)),
                              c.base->name() + " level " + std::to_string(n) + " gave " +
                                  m.normalized().str());
                  }
              }
              auto a2 = build_arc_tower(a2_model(table), 2);
              ConstructibleSet sub({std::string("a")});
              auto m = motivic_measure(a2, 3, sub);
              Polynomial expected_num;
              for (const auto& s : a2->level(3)->strata())
                  if (sub.contains(s.id)) expected_num += s.cls;
              require(expected_num == L(8),
                      "level-3 stratum class of the plane is not L^8");
              require(m.numerator() == expected_num,
                      "numerator is not the stratum class sum");
              require(m.denominator_polynomial() == L(6), "denominator is not L^6");
          });

    r.run(3, "pro-characteristic is representative-independent on 100 stable functions",
          5.0, [&] {
              std::mt19937 rng(2027);
              for (int i = 0; i < 100; ++i) {
                  auto tw = random_certified_tower(rng, table, "T", 5);
                  std::uniform_int_distribution<int> lvl(0, 2);
                  int n = lvl(rng);
                  auto f = plain_rep(tw, n, random_function(rng, tw->level(n)));
                  auto lifted = ind_lift(f, n + 3);
                  auto a = pro_characteristic(f, *tw->gamma_multipliers(), CharKind::gamma);
                  auto b = pro_characteristic(lifted, *tw->gamma_multipliers(),
                                              CharKind::gamma);
                  require(a.eq(b), "gamma value moved between levels " +
                                       std::to_string(n) + " and " + std::to_string(n + 3));
                  auto c = pro_characteristic(f, *tw->chi_multipliers(), CharKind::euler);
                  auto d =
                      pro_characteristic(lifted, *tw->chi_multipliers(), CharKind::euler);
                  require(c.eq(d), "euler value moved between levels");
              }
          });

    r.run(4, "projection formula on 200 randomized morphism models", 0, [&] {
        std::mt19937 rng(2029);
        for (int i = 0; i < 200; ++i) {
            auto y = random_variety(rng, table, "Y");
            auto f = random_morphism_onto(rng, y, "X");
            auto alpha = random_function(rng, f->source());
            auto beta = random_function(rng, y);
            require(pushforward(*f, alpha * pullback(*f, beta)) ==
                        pushforward(*f, alpha) * beta,
                    "projection formula failed at sample " + std::to_string(i));
        }
    });

    r.run(5, "base change on 100 randomized fiber squares, both functors", 0, [&] {
        std::mt19937 rng(2039);
        for (int i = 0; i < 100; ++i) {
            auto z = random_variety(rng, table, "Z");
            auto f = random_morphism_onto(rng, z, "X");
            auto g = random_morphism_onto(rng, z, "Y");
            auto sq = fiber_square(*f, *g);
            auto alpha = random_function(rng, f->source());
            require(pullback(*g, pushforward(*f, alpha)) ==
                        pushforward(*sq.pr_y, pullback(*sq.pr_x, alpha)),
                    "integer base change failed at sample " + std::to_string(i));
            auto m = random_motivic(rng, f->source());
            require(motivic_pullback(*g, motivic_pushforward(*f, m)) ==
                        motivic_pushforward(*sq.pr_y, motivic_pullback(*sq.pr_x, m)),
                    "class base change failed at sample " + std::to_string(i));
        }
    });

    r.run(6, "multiplicativity of chi and Gamma; Hodge at (1,1) recovers chi", 0, [&] {
        std::mt19937 rng(2053);
        EvaluationMap hodge = table->hodge_map();
        for (const auto& a : table->atoms()) {
            require(a.hodge.has_value(), "atom without a Hodge value: " + a.name);
            require(specialize_hodge(*a.hodge, C(1), C(1)) == C(a.euler),
                    "Hodge at (1,1) differs from euler for " + a.name);
        }
        for (int i = 0; i < 100; ++i) {
            auto x = random_variety(rng, table, "X");
            auto y = random_variety(rng, table, "Y");
            auto alpha = random_function(rng, x);
            auto beta = random_function(rng, y);
            require(chi(exterior_product(alpha, beta)) == chi(alpha) * chi(beta),
                    "chi is not multiplicative at sample " + std::to_string(i));
            require(gamma_class(exterior_product(alpha, beta)) ==
                        gamma_class(alpha) * gamma_class(beta),
                    "Gamma is not multiplicative at sample " + std::to_string(i));
            Polynomial h = hodge(gamma_class(alpha));
            require(specialize_hodge(h, C(1), C(1)) == C(chi(alpha)),
                    "Hodge of a Gamma image at (1,1) is not chi");
        }
    });

    r.run(7, "the canonical transformation is forced on 100 randomized classes", 0, [&] {
        std::mt19937 rng(2063);
        for (int i = 0; i < 100; ++i) {
            auto x = random_variety(rng, table, "X");
            auto h = random_morphism_onto(rng, x, "W");
            require(tau_canonical_constructible(*h) ==
                        e_transform(motivic_from_morphism(*h)),
                    "integer receiver disagrees at sample " + std::to_string(i));
            require(tau_canonical_motivic(*h) == motivic_from_morphism(*h),
                    "class receiver is not the identity at sample " + std::to_string(i));
        }
    });

    r.run(8, "Gamma does not commute with pushforward: 1 against L", 0, [&] {
        auto a1 = a1_model(table);
        auto pt = point_model(table);
        auto f = morphism_to_point(a1, pt);
        auto one = ConstructibleFunction::unit(a1);
        require(gamma_class(pushforward(*f, one)) == C(1), "pushforward side is not 1");
        require(gamma_class(one) == L(), "upstairs side is not L");
        require(C(1) != L(), "the free ring identifies 1 and L");
    });

    r.run(9,
          "functionization separates inequivalent classes on 20 surjective towers; "
          "the collapse example identifies",
          0, [&] {
              std::mt19937 rng(2069);
              const int depth = 4;
              int distinguished = 0;
              for (int i = 0; i < 20; ++i) {
                  auto tw = random_surjective_tower(rng, table, "S", depth);
                  std::uniform_int_distribution<int> lvl(0, depth);
                  int la = lvl(rng), lb = lvl(rng);
                  auto a = plain_rep(tw, la, random_function(rng, tw->level(la)));
                  auto b = plain_rep(tw, lb, random_function(rng, tw->level(lb)));
                  if (ind_eq(a, b, depth)) continue;
                  ++distinguished;
                  bool separated = false;
                  for (const auto& x : enumerate_propoints(*tw, depth))
                      if (functionize_eval(a, x) != functionize_eval(b, x))
                          separated = true;
                  require(separated, "no enumerated thread separates the pair at sample " +
                                         std::to_string(i));
              }
              require(distinguished >= 10, "too few inequivalent pairs were generated");

              // the two-point collapse: nonzero at its level, zero in the limit
              std::vector<Stratum> ab{{"a", C(1), "a"}, {"b", C(1), "b"}};
              auto l0 = std::make_shared<VarietyModel>("AB0", ab, table);
              auto l1 = std::make_shared<VarietyModel>("AB1", ab, table);
              std::vector<Stratum> just_a{{"a", C(1), "a"}};
              auto l2 = std::make_shared<VarietyModel>("PT2", just_a, table);
              std::map<std::string, MorphismModel::Leg> id_ab{{"a", {"a", C(1)}},
                                                              {"b", {"b", C(1)}}};
              std::map<std::string, MorphismModel::Leg> inj{{"a", {"a", C(1)}}};
              auto tw = Tower::from_levels(
                  "collapse", {l0, l1, l2},
                  {std::make_shared<MorphismModel>("b0", l1, l0, id_ab),
                   std::make_shared<MorphismModel>("b1", l2, l1, inj)});
              ConstructibleFunction alpha1(l1);
              alpha1.set("b", 7);
              auto a = plain_rep(tw, 1, alpha1);
              auto zero = plain_rep(tw, 1, ConstructibleFunction(l1));
              require(!alpha1.is_zero(), "the representative should be nonzero at level 1");
              require(ind_eq(a, zero, 2), "the collapse example does not identify with zero");
          });

    r.run(10, "pro-pushforward is functorial and satisfies the chi-ind triangle", 0, [&] {
        std::mt19937 rng(2081);
        auto plain = TransitionSystem<ConstructibleFunction>::plain();
        for (int i = 0; i < 20; ++i) {
            auto z_tower = random_certified_tower(rng, table, "Z", 4);
            auto g0 = random_morphism_onto(rng, z_tower->level(0), "Y0");
            auto g_pb = pullback_pro_morphism(z_tower, g0, 4);
            auto f0 = random_morphism_onto(rng, g_pb.source->level(0), "X0");
            auto f_pb = pullback_pro_morphism(g_pb.source, f0, 4);
            auto a = plain_rep(f_pb.source, 0, random_function(rng, f_pb.source->level(0)));

            auto composite = compose(f_pb.pm, g_pb.pm);
            auto one_shot = pro_pushforward(composite, a, plain, 4);
            auto two_step =
                pro_pushforward(g_pb.pm, pro_pushforward(f_pb.pm, a, plain, 4), plain, 4);
            require(one_shot.value == two_step.value,
                    "composite pushforward differs at sample " + std::to_string(i));

            const auto& P = *z_tower->chi_multipliers();
            auto before = pro_characteristic(a, P, CharKind::euler, 4);
            auto after = pro_characteristic(one_shot, P, CharKind::euler, 4);
            require(before.eq(after),
                    "chi-ind triangle failed at sample " + std::to_string(i));
        }
    });

    r.run(11, "exhaustive-lifting oracle matches pro_characteristic on depth-4 towers",
          10.0, [&] {
              std::mt19937 rng(2083);
              for (int i = 0; i < 40; ++i) {
                  auto tw = random_certified_tower(rng, table, "T", 4);
                  std::uniform_int_distribution<int> lvl(0, 3);
                  int n = lvl(rng);
                  auto f = plain_rep(tw, n, random_function(rng, tw->level(n)));
                  auto got_g =
                      pro_characteristic(f, *tw->gamma_multipliers(), CharKind::gamma);
                  auto want_g = oracle_fraction(tw, n, f.value, *tw->gamma_multipliers(),
                                                CharKind::gamma);
                  require(got_g.eq(want_g),
                          "gamma fraction differs at sample " + std::to_string(i));
                  auto got_e =
                      pro_characteristic(f, *tw->chi_multipliers(), CharKind::euler);
                  auto want_e = oracle_fraction(tw, n, f.value, *tw->chi_multipliers(),
                                                CharKind::euler);
                  require(got_e.eq(want_e),
                          "euler fraction differs at sample " + std::to_string(i));
              }
              // the bundled demo functions run through the same oracle
              for (const auto& entry : std::filesystem::directory_iterator(demo_dir)) {
                  if (entry.path().extension() != ".model") continue;
                  ModelFile mf = ModelFile::parse(slurp(entry.path()));
                  for (const auto& d : mf.tower_decls()) {
                      TowerPtr tw = mf.instantiate_tower(d.name);
                      if (!tw->chi_multipliers()) continue;
                      TowerPtr walked = tw;
                      if (!tw->depth()) {  // truncate generated towers at depth 4
                          std::vector<VarietyModelPtr> levels;
                          std::vector<MorphismModelPtr> bonds;
                          for (int n = 0; n <= 4; ++n) levels.push_back(tw->level(n));
                          for (int n = 0; n < 4; ++n) bonds.push_back(tw->bond(n));
                          walked = Tower::from_levels(d.name + "_cut", levels, bonds,
                                                      tw->chi_multipliers(),
                                                      tw->gamma_multipliers());
                      }
                      for (const auto& fd : mf.function_decls()) {
                          if (!fd.integer_valued()) continue;
                          auto declared = mf.constructible(fd);
                          if (!declared.model()->same_stratum_ids(*walked->level(0)))
                              continue;
                          ConstructibleFunction bound(walked->level(0));
                          for (const auto& [id, v] : declared.values()) bound.set(id, v);
                          auto f = plain_rep(walked, 0, bound);
                          auto got = pro_characteristic(f, *walked->chi_multipliers(),
                                                        CharKind::euler);
                          auto want =
                              oracle_fraction(walked, 0, bound, *walked->chi_multipliers(),
                                              CharKind::euler);
                          require(got.eq(want), "stored function " + fd.name + " in " +
                                                    entry.path().filename().string() +
                                                    " disagrees with the oracle");
                      }
                  }
              }
          });

    r.run(12,
          "levelwise Euler shadow commutes with twisted lifts; the two triangles "
          "agree through the Euler map",
          0, [&] {
              std::mt19937 rng(2087);
              for (int i = 0; i < 30; ++i) {
                  auto tower = random_surjective_tower(rng, table, "S", 3);
                  std::vector<MotivicFunction> twists;
                  for (int n = 0; n < 3; ++n)
                      twists.push_back(random_motivic(rng, tower->level(n + 1)));
                  auto ts = TransitionSystem<MotivicFunction>::twisted(
                      [twists](int n) { return twists.at(static_cast<size_t>(n)); });
                  IndFunction<MotivicFunction> a{tower, ts, 0,
                                                 random_motivic(rng, tower->level(0))};
                  auto ea = e_transform_ind(a);
                  for (int m = 1; m <= 3; ++m)
                      require(e_transform_ind(ind_lift(a, m)).value ==
                                  ind_lift(ea, m).value,
                              "shadow does not commute with the lift to level " +
                                  std::to_string(m));
              }
              EvaluationMap eps = table->euler_map();
              std::uniform_int_distribution<int> kdist(1, 3);
              for (int i = 0; i < 20; ++i) {
                  auto base = two_points_model(table);
                  std::vector<VarietyModelPtr> levels{base};
                  std::vector<MorphismModelPtr> bonds;
                  std::vector<Polynomial> steps;
                  std::vector<MotivicFunction> twists;
                  for (int n = 0; n < 3; ++n) {
                      int k = kdist(rng);
                      const VarietyModelPtr& cur = levels.back();
                      std::vector<Stratum> strata;
                      std::map<std::string, MorphismModel::Leg> legs;
                      for (const auto& s : cur->strata())
                          for (int j = 0; j < k; ++j) {
                              std::string id = s.id + "_" + std::to_string(j);
                              strata.push_back(Stratum{id, s.cls, s.component});
                              legs[id] = MorphismModel::Leg{s.id, C(1)};
                          }
                      auto next = std::make_shared<VarietyModel>(
                          "C" + std::to_string(n + 1), std::move(strata), table);
                      bonds.push_back(std::make_shared<MorphismModel>(
                          "cov" + std::to_string(n), next, cur, std::move(legs)));
                      levels.push_back(next);
                      int q = kdist(rng);
                      MotivicFunction twist(next);
                      for (const auto& s : next->strata()) twist.set(s.id, C(q));
                      twists.push_back(std::move(twist));
                      steps.push_back(C(static_cast<Integer>(q) * k));
                  }
                  auto tower =
                      Tower::from_levels("cover", std::move(levels), std::move(bonds));
                  auto ts = TransitionSystem<MotivicFunction>::twisted(
                      [twists](int n) { return twists.at(static_cast<size_t>(n)); });
                  IndFunction<MotivicFunction> a{tower, ts, 0,
                                                 random_motivic(rng, tower->level(0))};
                  MultiplierSystem P(steps);
                  auto gamma_side = pro_characteristic(a, P, CharKind::gamma, 3);
                  auto euler_side =
                      pro_characteristic(e_transform_ind(a), P, CharKind::euler, 3);
                  require(eps(gamma_side.numerator()) == euler_side.numerator(),
                          "numerators disagree through the Euler map");
                  require(gamma_side.exponents() == euler_side.exponents(),
                          "denominators disagree");
              }
          });

    r.run(13, "binary metric partials are 2 - 2^(1-m) with tail 2^(1-m)", 0, [&] {
        for (int m = 1; m <= 10; ++m) {
            std::vector<int> a(static_cast<size_t>(m), 0), b(static_cast<size_t>(m), 1);
            auto v = sequence_metric(2, a, b);
            Integer pow = Integer(1) << m;  // 2^m
            require(v.partial == Rational(2) - Rational(2, pow),
                    "partial at m=" + std::to_string(m) + " is " + v.partial.str());
            require(v.tail_bound == Rational(2, pow),
                    "tail at m=" + std::to_string(m) + " is " + v.tail_bound.str());
        }
        auto same = sequence_metric(5, {1, 2, 3}, {1, 2, 3});
        require(same.partial == Rational(0), "distance of equal prefixes is not 0");
    });

    r.run(14, "the CLI checks every demo, prints the golden strings, and round-trips",
          0, [&] {
              require(!cli.empty(), "no CLI path was passed to the acceptance binary");
              int demo_count = 0;
              for (const auto& entry : std::filesystem::directory_iterator(demo_dir)) {
                  if (entry.path().extension() != ".model") continue;
                  ++demo_count;
                  auto res = run_cmd(cli + " check " + entry.path().string());
                  require(res.status == 0,
                          "check failed on " + entry.path().filename().string());
                  ModelFile mf = ModelFile::parse(slurp(entry.path()));
                  ModelFile again = ModelFile::parse(mf.print());
                  require(mf == again,
                          "round trip changed " + entry.path().filename().string());
              }
              require(demo_count >= 6, "expected at least six bundled demos");

              std::string base = demo_dir + "/";
              auto chi_out = run_cmd(cli + " chi-ind " + base +
                                     "p1_power.model --tower TPOW --function one");
              require(chi_out.status == 0 && first_line(chi_out.out) == "2",
                      "chi-ind of the power demo printed '" + first_line(chi_out.out) +
                          "'");
              auto m1 =
                  run_cmd(cli + " measure " + base + "arc_a1.model --tower TARC --level 4");
              require(m1.status == 0 && first_line(m1.out) == "L",
                      "measure of the line printed '" + first_line(m1.out) + "'");
              auto m2 =
                  run_cmd(cli + " measure " + base + "arc_a2.model --tower TARC --level 3");
              require(m2.status == 0 && first_line(m2.out) == "L^2",
                      "measure of the plane printed '" + first_line(m2.out) + "'");
              auto m3 =
                  run_cmd(cli + " measure " + base + "arc_p1.model --tower TARC --level 2");
              require(m3.status == 0 && first_line(m3.out) == "L + 1",
                      "measure of the projective line printed '" + first_line(m3.out) +
                          "'");
          });

    if (r.failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", r.failures);
    return 1;
}
