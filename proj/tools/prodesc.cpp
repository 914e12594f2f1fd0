// prodesc: exact computations with towers of discrete modules over profinite
// groups presented by finite quotients. See README.md for the input schema.
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "prodesc/errors.hpp"
#include "prodesc/json_io.hpp"
#include "prodesc/verify.hpp"

using namespace prodesc;

namespace {

struct Options {
    std::string input;
    std::string output = "table";
    std::optional<int> s, s_max, t_min, t_max, n_max, depth, horizon;
    std::string group, module, tower, module_tower, complex_tower, model = "descent";
    bool dump_complex = false;
};

int depth_for(const ProfiniteTower& t, const Options& o) {
    int d = o.depth.value_or(std::min(t.depth(), 4));
    if (d < 0 || d > t.depth()) throw InputError("depth outside the tower");
    return d;
}

void emit(const Json& machine, const std::string& human, const Options& o) {
    if (o.output == "json")
        std::cout << machine.dump(2) << "\n";
    else
        std::cout << human;
}

std::string progroup_table(const ProGroup& p, int indent = 2) {
    std::ostringstream os;
    std::string pad(static_cast<size_t>(indent), ' ');
    os << pad << "ml: " << to_json(p.ml)["kind"].get<std::string>() << "   lim1: "
       << to_string(p.lim1) << "\n";
    if (p.lim_value)
        os << pad << "lim = " << p.lim_value->to_string() << "\n";
    else
        os << pad << "lim = pro-object (see levels)\n";
    os << pad << "levels:";
    for (const auto& g : p.levels) os << "  " << g.to_string();
    os << "\n";
    if (!p.note.empty()) os << pad << "note: " << p.note << "\n";
    return os.str();
}

std::string assembled_table(const AssembledCohomology& a) {
    std::ostringstream os;
    os << "  sub (lim^1): " << to_string(a.sub) << "\n" << progroup_table(a.quotient);
    if (!a.extension_note.empty()) os << "  " << a.extension_note << "\n";
    for (const auto& f : a.flags) os << "  flag: " << f << "\n";
    return os.str();
}

std::string page_table(const E2Page& p) {
    std::ostringstream os;
    os << "  E2 cells (s, t):\n";
    for (const auto& c : p.cells) {
        os << "    (" << c.s << "," << std::setw(3) << c.t << ")  ";
        if (c.exact)
            os << c.exact->to_string();
        else if (c.quotient.lim_value)
            os << c.quotient.lim_value->to_string() << "  [sub " << to_string(c.sub) << "]";
        else
            os << "pro-object  [sub " << to_string(c.sub) << "]";
        for (const auto& f : c.flags) os << "  !" << f;
        os << "\n";
    }
    return os.str();
}

const ModuleTower& pick_module_tower(const ProblemFile& pf, const std::string& name) {
    auto it = pf.module_towers.find(name);
    if (it == pf.module_towers.end()) throw InputError("unknown module tower: " + name);
    return it->second;
}

const GComplexTower& pick_complex_tower(const ProblemFile& pf, const std::string& name) {
    auto it = pf.complex_towers.find(name);
    if (it == pf.complex_towers.end()) throw InputError("unknown complex tower: " + name);
    return it->second;
}

const ProfiniteTower& tower_of(const ModuleTower& t) { return *t.head.front().tower; }

int run_command(const std::string& cmd, const Options& o) {
    if (cmd == "verify-paper") {
        VerifyReport rep = verify_paper(o.output == "table" ? &std::cout : nullptr);
        if (o.output == "json") std::cout << to_json(rep).dump(2) << "\n";
        return rep.all_pass() ? 0 : 1;
    }

    if (o.input.empty()) throw InputError("this command needs --input FILE");
    ProblemFile pf = load_problem(o.input);
    int horizon = o.horizon.value_or(12);
    int n_max = o.n_max.value_or(3);

    if (cmd == "cohomology") {
        if (o.module.empty()) throw InputError("cohomology needs --module NAME");
        auto it = pf.modules.find(o.module);
        if (it == pf.modules.end()) throw InputError("unknown module: " + o.module);
        const DiscreteGModule& m = it->second;
        int s = o.s.value_or(1);
        int depth = o.depth.value_or(m.level);
        if (depth == m.level) {
            FgAbGroup h = finite_cohomology(m, depth, s);
            Json machine{{"schema", "prodesc/1"}, {"command", "cohomology"},
                         {"module", o.module}, {"s", s}, {"level", depth},
                         {"value", to_json(h)}};
            std::ostringstream os;
            os << "H^" << s << "(Q_" << depth << "; " << o.module << ") = " << h.to_string()
               << "\n";
            if (o.dump_complex) {
                auto cx = inhomogeneous_complex(m, depth, s + 1);
                Json diffs = Json::array();
                for (const auto& d : cx.diffs) diffs.push_back(matrix_to_json(d.matrix()));
                machine["complex"] = Json{{"model", "inhomogeneous"}, {"differentials", diffs}};
                os << "  (differentials dumped in the json output)\n";
            }
            emit(machine, os.str(), o);
        } else {
            StabilizedColimit col = continuous_cohomology(m, s, depth);
            Json machine{{"schema", "prodesc/1"}, {"command", "cohomology"},
                         {"module", o.module}, {"s", s}, {"depth", depth},
                         {"colimit", to_json(col)}};
            std::ostringstream os;
            os << "H^" << s << " along levels " << col.first_level << ".." << depth << ":";
            for (const auto& v : col.values) os << "  " << v.to_string();
            os << "\n";
            if (col.value)
                os << "  stabilized: " << col.value->to_string() << " (" << col.note << ")\n";
            else
                os << "  not stabilized within depth\n";
            emit(machine, os.str(), o);
        }
        return 0;
    }

    if (cmd == "hcts" || cmd == "hcont" || cmd == "compare-cohomology") {
        if (o.module_tower.empty()) throw InputError(cmd + " needs --module-tower NAME");
        const ModuleTower& t = pick_module_tower(pf, o.module_tower);
        int depth = depth_for(tower_of(t), o);
        int s = o.s.value_or(1);
        if (cmd == "hcts") {
            auto res = h_cts(t, s, n_max, depth, horizon);
            Json machine{{"schema", "prodesc/1"}, {"command", "hcts"},
                         {"module_tower", o.module_tower}, {"s", s}, {"depth", depth},
                         {"result", to_json(res)}};
            std::ostringstream os;
            os << "H^" << s << "_cts of " << o.module_tower << ":\n" << assembled_table(res);
            emit(machine, os.str(), o);
        } else if (cmd == "hcont") {
            auto res = h_cont(t, s, depth, horizon);
            Json machine{{"schema", "prodesc/1"}, {"command", "hcont"},
                         {"module_tower", o.module_tower}, {"s", s}, {"depth", depth},
                         {"result", to_json(res)}};
            std::ostringstream os;
            os << "H^" << s << "_cont of " << o.module_tower << ":\n" << assembled_table(res);
            emit(machine, os.str(), o);
        } else {
            auto rep = compare_cts_cont(t, s, n_max, depth, horizon);
            Json machine{{"schema", "prodesc/1"}, {"command", "compare-cohomology"},
                         {"module_tower", o.module_tower}, {"s", s}, {"depth", depth},
                         {"result", to_json(rep)}};
            std::ostringstream os;
            os << "compare H^" << s << "_cts vs H^" << s << "_cont of " << o.module_tower
               << ": " << (rep.agree ? (*rep.agree ? "agree" : "DISAGREE") : "undetermined")
               << "\n  " << rep.details << "\n";
            emit(machine, os.str(), o);
        }
        return 0;
    }

    if (cmd == "e2" || cmd == "compare-e2") {
        if (o.complex_tower.empty()) throw InputError(cmd + " needs --complex-tower NAME");
        const GComplexTower& t = pick_complex_tower(pf, o.complex_tower);
        const ProfiniteTower& gt = *t.head.front().modules.front().tower;
        int depth = o.depth.value_or(std::min(gt.depth(), 4));
        int s_max = o.s_max.value_or(2);
        int lo = t.head.front().lo, hi = t.head.front().hi();
        int t_min = o.t_min.value_or(lo - 1), t_max = o.t_max.value_or(hi);
        if (cmd == "e2") {
            E2Page page = (o.model == "jannsen")
                              ? jannsen_e2(t, s_max, t_min, t_max, depth, horizon)
                              : descent_e2(t, s_max, t_min, t_max, n_max, depth, horizon);
            Json machine{{"schema", "prodesc/1"}, {"command", "e2"}, {"model", o.model},
                         {"complex_tower", o.complex_tower}, {"page", to_json(page)}};
            std::ostringstream os;
            os << o.model << " E2 of " << o.complex_tower << ":\n" << page_table(page);
            emit(machine, os.str(), o);
        } else {
            auto cmpres = compare_e2(t, s_max, t_min, t_max, n_max, depth, horizon);
            Json machine{{"schema", "prodesc/1"}, {"command", "compare-e2"},
                         {"complex_tower", o.complex_tower}, {"result", to_json(cmpres)}};
            std::ostringstream os;
            os << "compare E2 pages of " << o.complex_tower << ":\n";
            for (const auto& cc : cmpres.cells) {
                os << "  (" << cc.s << "," << std::setw(3) << cc.t << ")  ";
                switch (cc.verdict) {
                    case CellVerdict::equal: os << "equal"; break;
                    case CellVerdict::differs: os << "DIFFERS  " << cc.detail; break;
                    default: os << "undetermined"; break;
                }
                os << (cc.ml_asserted ? "  [ML asserted]" : "") << "\n";
            }
            emit(machine, os.str(), o);
        }
        return 0;
    }

    if (cmd == "counterexample") {
        if (o.module_tower.empty()) throw InputError("counterexample needs --module-tower NAME");
        const ModuleTower& t = pick_module_tower(pf, o.module_tower);
        int depth = depth_for(tower_of(t), o);
        int s_max = o.s_max.value_or(3);
        auto rep = gamma_tower_counterexample(t, s_max, depth, horizon);
        Json machine{{"schema", "prodesc/1"}, {"command", "counterexample"},
                     {"module_tower", o.module_tower}, {"result", to_json(rep)}};
        std::ostringstream os;
        os << "coinduced-tower resolution check for " << o.module_tower << ":\n";
        for (size_t s = 0; s < rep.by_degree.size(); ++s) {
            os << " s = " << s << ":\n" << assembled_table(rep.by_degree[s]);
        }
        os << "  lim^1 of the tower: " << to_string(rep.lim1_of_tower) << "\n"
           << "  degrees >= 2 vanish: " << (rep.high_degrees_vanish ? "yes" : "NO") << "\n"
           << "  degree 1 matches lim^1: " << (rep.degree_one_matches_lim1 ? "yes" : "NO") << "\n"
           << "  degree 0 matches fixed points: "
           << (rep.degree_zero_matches_fixed_points ? "yes" : "NO") << "\n";
        emit(machine, os.str(), o);
        return rep.passed() ? 0 : 2;
    }

    throw InputError("unknown command: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact pro-discrete cohomology and descent E2 computations"};
    app.require_subcommand(1);

    Options o;
    std::vector<CLI::App*> subs;
    for (const char* name : {"cohomology", "hcts", "hcont", "compare-cohomology", "e2",
                             "compare-e2", "counterexample", "verify-paper"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", o.input, "problem file (JSON, schema prodesc/1)");
        sub->add_option("--output", o.output, "table|json")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--s", o.s, "cohomological degree");
        sub->add_option("--s-max", o.s_max, "maximal s for E2 pages");
        sub->add_option("--t-min", o.t_min, "minimal homotopy degree");
        sub->add_option("--t-max", o.t_max, "maximal homotopy degree");
        sub->add_option("--n-max", o.n_max, "cochain degree cap (default 3)");
        sub->add_option("--depth", o.depth, "tower level to compute at");
        sub->add_option("--horizon", o.horizon, "materialization horizon (default 12)");
        sub->add_option("--group", o.group, "named group");
        sub->add_option("--module", o.module, "named module");
        sub->add_option("--tower", o.tower, "named profinite tower");
        sub->add_option("--module-tower", o.module_tower, "named module tower");
        sub->add_option("--complex-tower", o.complex_tower, "named complex tower");
        sub->add_flag("--dump-complex", o.dump_complex,
                      "include the cochain differentials in the json output");
        if (std::string(name) == "e2")
            sub->add_option("--model", o.model, "descent|jannsen")
                ->check(CLI::IsMember({"descent", "jannsen"}));
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* sub : subs)
            if (sub->parsed()) return run_command(sub->get_name(), o);
        throw InputError("no command given");
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
