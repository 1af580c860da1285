// Command-line front end: load model files, validate them, and compute
// cylinder measures, pro-characteristics, and sequence-space metrics.
//
// Exit codes: 0 success, 1 validation or stability failure, 2 usage or
// parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "demo_models.hpp"
#include "proalg/model_file.hpp"

namespace {

using namespace proalg;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream out;
        out << std::cin.rdbuf();
        return out.str();
    }
    std::ifstream in(path);
    if (!in.good()) throw Error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<int> parse_symbols(const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        return out;
    }
    for (char c : text) {
        if (c < '0' || c > '9')
            throw std::invalid_argument("symbols must be digits or comma-separated");
        out.push_back(c - '0');
    }
    return out;
}

ConstructibleSet parse_set(const std::string& text) {
    std::set<std::string> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) ids.insert(item);
    return ConstructibleSet(std::move(ids));
}

// the multiplier system a command should use for the given characteristic:
// the tower's own declared system, the linked multiplier block, or the
// per-bond classification of an explicit tower
MultiplierSystem resolve_multipliers(const ModelFile& mf, const TowerDecl& decl,
                                     const TowerPtr& tw, CharKind kind,
                                     bool* certified_route) {
    *certified_route = false;
    const auto& declared =
        kind == CharKind::euler ? tw->chi_multipliers() : tw->gamma_multipliers();
    if (declared) {
        *certified_route = true;
        return *declared;
    }
    if (!decl.multipliers.empty()) {
        const MultipliersDecl* m = mf.find_multipliers(decl.multipliers);
        return MultiplierSystem(m->steps);
    }
    if (!tw->depth())
        throw Error("tower " + decl.name +
                    " has no multiplier system for this characteristic");
    std::vector<Polynomial> steps;
    for (int n = 0; n < *tw->depth(); ++n) {
        auto m = bond_multiplier(*tw->bond(n), kind);
        if (!m)
            throw Error("bond " + std::to_string(n) + " of tower " + decl.name +
                        " has no constant multiplier");
        steps.push_back(*m);
    }
    *certified_route = true;  // read off the bonds themselves
    return MultiplierSystem(steps);
}

ConstructibleFunction resolve_function(const ModelFile& mf, const std::string& name,
                                       const TowerPtr& tw) {
    VarietyModelPtr level0 = tw->level(0);
    for (const auto& d : mf.function_decls()) {
        if (d.name != name) continue;
        ConstructibleFunction declared = mf.constructible(d);
        if (!declared.model()->same_stratum_ids(*level0))
            throw Error("function " + name + " does not live on level 0 of the tower");
        ConstructibleFunction bound(level0);
        for (const auto& [id, v] : declared.values()) bound.set(id, v);
        return bound;
    }
    if (name == "one") return ConstructibleFunction::unit(level0);
    throw Error("unknown function: " + name);
}

void print_fraction(const LocalizedClass& value, const std::string& stability,
                    const std::string& format) {
    LocalizedClass norm = value.normalized();
    if (format == "json") {
        nlohmann::json j;
        j["numerator"] = norm.numerator().str();
        j["denominator"] = norm.denominator_str();
        j["stability"] = stability;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << norm.str() << "\n";
        std::cout << "stability: " << stability << "\n";
    }
}

int cmd_check(const std::string& path) {
    ModelFile mf = ModelFile::parse(read_input(path));
    ValidationReport rep = check_model_file(mf);
    if (!rep.ok()) {
        std::cerr << rep.str();
        return 1;
    }
    std::cout << "ok: " << mf.variety_order().size() << " varieties, "
              << mf.morphism_order().size() << " morphisms, " << mf.tower_decls().size()
              << " towers\n";
    return 0;
}

int cmd_measure(const std::string& path, const std::string& tower_name, int level,
                const std::string& set_text, bool full_set, const std::string& format) {
    ModelFile mf = ModelFile::parse(read_input(path));
    const TowerDecl& decl = mf.tower_decl(tower_name);
    TowerPtr tw = mf.instantiate_tower(tower_name);
    bool certified = false;
    MultiplierSystem gamma = resolve_multipliers(mf, decl, tw, CharKind::gamma, &certified);
    if (!certified) throw Error("tower " + tower_name + " is not certified for measures");
    ConstructibleSet c =
        full_set ? ConstructibleSet::full(*tw->level(level)) : parse_set(set_text);
    auto f = cylinder_function(tw, level, c);
    auto v = pro_characteristic(f, gamma, CharKind::gamma);
    print_fraction(v, "certified", format);
    return 0;
}

int cmd_chi_ind(const std::string& path, const std::string& tower_name,
                const std::string& function_name, int horizon, const std::string& format) {
    ModelFile mf = ModelFile::parse(read_input(path));
    const TowerDecl& decl = mf.tower_decl(tower_name);
    TowerPtr tw = mf.instantiate_tower(tower_name);
    bool certified_route = false;
    MultiplierSystem chi_steps =
        resolve_multipliers(mf, decl, tw, CharKind::euler, &certified_route);
    IndFunction<ConstructibleFunction> f{
        tw, TransitionSystem<ConstructibleFunction>::plain(), 0,
        resolve_function(mf, function_name, tw)};
    if (horizon < 0) horizon = tw->depth() ? *tw->depth() : 3;
    StabilityReport rep;
    LocalizedClass v = pro_characteristic(f, chi_steps, CharKind::euler, horizon, &rep);
    std::string stability =
        rep.certified ? "certified" : "checked up to level " + std::to_string(rep.horizon);
    print_fraction(v, stability, format);
    return 0;
}

int cmd_metric(int k, const std::string& a_text, const std::string& b_text,
               const std::string& format) {
    MetricValue v = sequence_metric(k, parse_symbols(a_text), parse_symbols(b_text));
    if (format == "json") {
        nlohmann::json j;
        j["partial"] = v.partial.str();
        j["tail_bound"] = v.tail_bound.str();
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "partial: " << v.partial.str() << "\n";
        std::cout << "tail_bound: " << v.tail_bound.str() << "\n";
    }
    return 0;
}

int cmd_demo(const std::string& name) {
    const auto& table = proalg::demos::all();
    if (name.empty()) {
        for (const auto& [n, _] : table) std::cout << n << "\n";
        return 0;
    }
    auto it = table.find(name);
    if (it == table.end()) throw Error("unknown demo: " + name);
    std::cout << it->second;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Euler characteristics and motivic measures on projective "
                 "towers of stratified variety models"};
    app.require_subcommand(1);

    std::string file, tower, function_name = "one", set_text, a_text, b_text, demo_name;
    std::string format = "plain";
    int level = 0, horizon = -1, k = 2;
    bool set_given = false;

    auto add_format = [&format](CLI::App* cmd) {
        cmd->add_option("--format", format, "plain or json")
            ->check(CLI::IsMember({"plain", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "validate a model file");
    check->add_option("file", file, "model file, or - for stdin")->required();

    CLI::App* measure = app.add_subcommand("measure", "cylinder-set measure on a tower");
    measure->add_option("file", file)->required();
    measure->add_option("--tower", tower)->required();
    measure->add_option("--level", level)->required();
    CLI::Option* set_opt = measure->add_option(
        "--set", set_text, "comma-separated stratum ids; omit for the full cylinder");
    add_format(measure);

    CLI::App* chi_ind =
        app.add_subcommand("chi-ind", "pro-characteristic of a function on a tower");
    chi_ind->add_option("file", file)->required();
    chi_ind->add_option("--tower", tower)->required();
    chi_ind->add_option("--function", function_name)->required();
    chi_ind->add_option("--horizon", horizon);
    add_format(chi_ind);

    CLI::App* metric = app.add_subcommand("metric", "sequence-space distance");
    metric->add_option("--k", k)->required();
    metric->add_option("--a", a_text)->required();
    metric->add_option("--b", b_text)->required();
    add_format(metric);

    CLI::App* demo = app.add_subcommand("demo", "print a bundled demo model file");
    demo->add_option("name", demo_name, "demo name; omit to list");

    try {
        app.parse(argc, argv);
        set_given = set_opt->count() > 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(file);
        if (measure->parsed())
            return cmd_measure(file, tower, level, set_text, !set_given, format);
        if (chi_ind->parsed()) return cmd_chi_ind(file, tower, function_name, horizon, format);
        if (metric->parsed()) return cmd_metric(k, a_text, b_text, format);
        if (demo->parsed()) return cmd_demo(demo_name);
    } catch (const proalg::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const proalg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
