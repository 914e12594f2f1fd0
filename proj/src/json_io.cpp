#include "prodesc/json_io.hpp"

#include <fstream>
#include <sstream>

#include "prodesc/errors.hpp"

namespace prodesc {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

Int int_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            fail(where, "not an integer literal");
        }
    }
    fail(where, "expected an integer or a decimal string");
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

FiniteGroup group_from_json(const Json& j, const std::map<std::string, FiniteGroup>& known,
                            const std::string& where, const std::string& name) {
    FiniteGroup g;
    if (j.contains("cyclic"))
        g = cyclic(j["cyclic"].get<int>());
    else if (j.contains("dihedral"))
        g = dihedral(j["dihedral"].get<int>());
    else if (j.contains("product")) {
        const auto& factors = j["product"];
        if (!factors.is_array() || factors.size() < 2) fail(where, "product needs >= 2 factors");
        auto lookup = [&](const std::string& n) {
            auto it = known.find(n);
            if (it == known.end()) fail(where, "unknown group '" + n + "'");
            return it->second;
        };
        g = lookup(factors[0].get<std::string>());
        for (size_t i = 1; i < factors.size(); ++i)
            g = direct_product(g, lookup(factors[i].get<std::string>()));
    } else if (j.contains("table")) {
        g.order = field(j, "order", where).get<int>();
        for (const auto& row : field(j, "table", where)) {
            g.table.emplace_back();
            for (const auto& v : row) g.table.back().push_back(v.get<int>());
        }
    } else {
        fail(where, "group needs one of: cyclic, dihedral, product, table");
    }
    g.name = name;
    if (auto bad = validate_group(g)) fail(where, *bad);
    return g;
}

}  // namespace

SparseMat matrix_from_json(const Json& j, int rows, int cols, const std::string& where) {
    if (!j.is_array()) fail(where, "matrix must be an array of rows");
    if (static_cast<int>(j.size()) != rows) {
        std::ostringstream os;
        os << "matrix must have " << rows << " rows, found " << j.size();
        fail(where, os.str());
    }
    MatBuilder b(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            std::ostringstream os;
            os << "row " << i << " must have " << cols << " entries";
            fail(where, os.str());
        }
        for (int k = 0; k < cols; ++k) {
            std::ostringstream os;
            os << where << "[" << i << "][" << k << "]";
            b.add(i, k, int_from_json(row[static_cast<size_t>(k)], os.str()));
        }
    }
    return b.build();
}

Json matrix_to_json(const SparseMat& m) {
    Json rows = Json::array();
    for (const auto& row : m.to_dense()) {
        Json r = Json::array();
        for (const auto& v : row) {
            if (v.fits_slong_p())
                r.push_back(v.get_si());
            else
                r.push_back(v.get_str());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

ProblemFile parse_problem(const Json& j) {
    if (!j.is_object()) throw InputError("problem file must be a JSON object");
    if (!j.contains("schema") || j["schema"].get<std::string>() != "prodesc/1")
        throw InputError("problem file needs \"schema\": \"prodesc/1\"");

    ProblemFile pf;
    if (j.contains("groups"))
        for (const auto& [name, gj] : j["groups"].items())
            pf.groups.emplace(name, group_from_json(gj, pf.groups, "groups." + name, name));

    if (j.contains("towers"))
        for (const auto& [name, tj] : j["towers"].items()) {
            const std::string where = "towers." + name;
            ProfiniteTower tw;
            if (tj.contains("trivial"))
                tw = trivial_tower();
            else if (tj.contains("cyclic_prime")) {
                const auto& c = tj["cyclic_prime"];
                tw = cyclic_prime_tower(field(c, "p", where).get<int>(),
                                        field(c, "depth", where).get<int>());
            } else if (tj.contains("constant")) {
                const auto& c = tj["constant"];
                auto it = pf.groups.find(field(c, "group", where).get<std::string>());
                if (it == pf.groups.end()) fail(where, "unknown group");
                tw = constant_tower(it->second, field(c, "depth", where).get<int>());
            } else {
                for (const auto& lname : field(tj, "levels", where)) {
                    auto it = pf.groups.find(lname.get<std::string>());
                    if (it == pf.groups.end())
                        fail(where, "unknown group '" + lname.get<std::string>() + "'");
                    tw.levels.push_back(it->second);
                }
                size_t idx = 0;
                for (const auto& mj : field(tj, "transitions", where)) {
                    if (idx + 1 >= tw.levels.size()) fail(where, "too many transitions");
                    GroupHom h;
                    h.source = tw.levels[idx + 1];
                    h.target = tw.levels[idx];
                    for (const auto& v : mj) h.map.push_back(v.get<int>());
                    tw.transitions.push_back(std::move(h));
                    ++idx;
                }
            }
            tw.name = name;
            if (auto bad = validate_tower(tw)) fail(where, *bad);
            pf.towers.emplace(name, std::make_shared<const ProfiniteTower>(std::move(tw)));
        }

    if (j.contains("modules"))
        for (const auto& [name, mj] : j["modules"].items()) {
            const std::string where = "modules." + name;
            auto it = pf.towers.find(field(mj, "tower", where).get<std::string>());
            if (it == pf.towers.end()) fail(where, "unknown tower");
            int level;
            if (mj.contains("group_level"))
                level = mj["group_level"].get<int>();
            else
                level = field(mj, "level", where).get<int>();
            long rank = field(mj, "rank", where).get<long>();
            std::vector<Int> torsion;
            if (mj.contains("torsion")) {
                size_t ti = 0;
                for (const auto& d : mj["torsion"]) {
                    std::ostringstream os;
                    os << where << ".torsion[" << ti++ << "]";
                    torsion.push_back(int_from_json(d, os.str()));
                }
            }
            FgAbGroup g = FgAbGroup::of(rank, std::move(torsion));
            const FiniteGroup& q = it->second->level(level);
            std::vector<SparseMat> action(static_cast<size_t>(q.order),
                                          SparseMat::identity(g.gens()));
            if (mj.contains("action"))
                for (const auto& [elt, matj] : mj["action"].items()) {
                    int e = std::stoi(elt);
                    if (e < 0 || e >= q.order) fail(where + ".action", "element out of range");
                    action[static_cast<size_t>(e)] =
                        matrix_from_json(matj, g.gens(), g.gens(), where + ".action." + elt);
                }
            pf.modules.emplace(name, make_module(it->second, level, std::move(g), std::move(action)));
        }

    auto parse_rule = [&](const Json& tj, const std::string& where) -> std::optional<int> {
        if (!tj.contains("rule")) return std::nullopt;
        const auto& r = tj["rule"];
        if (r.is_string()) {
            if (r.get<std::string>() == "explicit") return std::nullopt;
            fail(where + ".rule", "expected \"explicit\" or {\"periodic\": p}");
        }
        return field(r, "periodic", where + ".rule").get<int>();
    };

    if (j.contains("module_towers"))
        for (const auto& [name, tj] : j["module_towers"].items()) {
            const std::string where = "module_towers." + name;
            ModuleTower t;
            for (const auto& mn : field(tj, "head", where)) {
                auto it = pf.modules.find(mn.get<std::string>());
                if (it == pf.modules.end())
                    fail(where, "unknown module '" + mn.get<std::string>() + "'");
                t.head.push_back(it->second);
            }
            size_t idx = 0;
            for (const auto& mj : field(tj, "transitions", where)) {
                if (idx + 1 >= t.head.size()) fail(where, "too many transitions");
                std::ostringstream os;
                os << where << ".transitions[" << idx << "]";
                SparseMat m = matrix_from_json(mj, t.head[idx].underlying.gens(),
                                               t.head[idx + 1].underlying.gens(), os.str());
                t.maps.emplace_back(t.head[idx + 1].underlying, t.head[idx].underlying, m);
                ++idx;
            }
            t.period = parse_rule(tj, where);
            pf.module_towers.emplace(name, validate_module_tower(std::move(t)));
        }

    if (j.contains("complex_towers"))
        for (const auto& [name, tj] : j["complex_towers"].items()) {
            const std::string where = "complex_towers." + name;
            GComplexTower t;
            for (const auto& xj : field(tj, "head", where)) {
                int lo = xj.contains("lo") ? xj["lo"].get<int>() : 0;
                std::vector<DiscreteGModule> mods;
                for (const auto& mn : field(xj, "modules", where)) {
                    auto it = pf.modules.find(mn.get<std::string>());
                    if (it == pf.modules.end())
                        fail(where, "unknown module '" + mn.get<std::string>() + "'");
                    mods.push_back(it->second);
                }
                std::vector<Homomorphism> diffs;
                size_t di = 0;
                if (xj.contains("differentials"))
                    for (const auto& dj : xj["differentials"]) {
                        if (di + 1 >= mods.size()) fail(where, "too many differentials");
                        std::ostringstream os;
                        os << where << ".differentials[" << di << "]";
                        SparseMat m = matrix_from_json(dj, mods[di].underlying.gens(),
                                                       mods[di + 1].underlying.gens(), os.str());
                        diffs.emplace_back(mods[di + 1].underlying, mods[di].underlying, m);
                        ++di;
                    }
                t.head.push_back(make_gchain(lo, std::move(mods), std::move(diffs)));
            }
            size_t idx = 0;
            for (const auto& mj : field(tj, "transitions", where)) {
                if (idx + 1 >= t.head.size()) fail(where, "too many transitions");
                std::vector<Homomorphism> per_degree;
                const auto& src = t.head[idx + 1];
                const auto& dst = t.head[idx];
                size_t k = 0;
                for (const auto& dm : field(mj, "degree_maps", where)) {
                    std::ostringstream os;
                    os << where << ".transitions[" << idx << "].degree_maps[" << k << "]";
                    SparseMat m = matrix_from_json(
                        dm, dst.modules[k].underlying.gens(), src.modules[k].underlying.gens(),
                        os.str());
                    per_degree.emplace_back(src.modules[k].underlying, dst.modules[k].underlying, m);
                    ++k;
                }
                t.maps.push_back(std::move(per_degree));
                ++idx;
            }
            t.period = parse_rule(tj, where);
            pf.complex_towers.emplace(name, validate_gcomplex_tower(std::move(t)));
        }

    if (j.contains("requests")) {
        if (!j["requests"].is_array()) throw InputError("requests must be an array");
        pf.requests = j["requests"];
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return parse_problem(j);
}

Json to_json(const FgAbGroup& g) {
    Json torsion = Json::array();
    for (const auto& d : g.torsion()) {
        if (d.fits_slong_p())
            torsion.push_back(d.get_si());
        else
            torsion.push_back(d.get_str());
    }
    return Json{{"rank", g.rank()}, {"torsion", std::move(torsion)}};
}

Json to_json(const MlStatus& s) {
    Json j;
    switch (s.kind) {
        case MlKind::certified: j["kind"] = "ML-certified"; j["k"] = s.k; break;
        case MlKind::non_ml: j["kind"] = "nonML-certified"; break;
        default: j["kind"] = "undetermined"; j["horizon"] = s.horizon; break;
    }
    j["reason"] = s.reason;
    if (s.witness) {
        j["witness"] = Json{{"period_composite", matrix_to_json(s.witness->period_composite.matrix())},
                            {"stable_image", matrix_to_json(s.witness->stable_image)},
                            {"level", s.witness->level}};
    }
    return j;
}

const char* to_string(Lim1 l) {
    switch (l) {
        case Lim1::zero: return "zero";
        case Lim1::nonzero: return "nonzero";
        default: return "undetermined";
    }
}

Json to_json(const ProGroup& p) {
    Json levels = Json::array();
    for (const auto& g : p.levels) levels.push_back(to_json(g));
    Json j{{"levels", std::move(levels)}, {"ml", to_json(p.ml)}, {"lim1", to_string(p.lim1)}};
    if (p.lim_value)
        j["lim"] = to_json(*p.lim_value);
    else
        j["lim"] = "pro-object (see levels)";
    if (!p.note.empty()) j["note"] = p.note;
    return j;
}

Json to_json(const AssembledCohomology& a) {
    Json j{{"sub_lim1", to_string(a.sub)}, {"quotient", to_json(a.quotient)}};
    if (!a.extension_note.empty()) j["extension_note"] = a.extension_note;
    if (!a.flags.empty()) j["flags"] = a.flags;
    return j;
}

Json to_json(const StabilizedColimit& c) {
    Json values = Json::array();
    for (const auto& g : c.values) values.push_back(to_json(g));
    Json j{{"first_level", c.first_level}, {"levels", std::move(values)}};
    if (c.stabilized_at)
        j["stabilized_at"] = *c.stabilized_at;
    else
        j["stabilized_at"] = "not within depth";
    if (c.value) j["value"] = to_json(*c.value);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

Json to_json(const E2Cell& c) {
    Json j{{"s", c.s}, {"t", c.t}};
    if (c.exact)
        j["exact"] = to_json(*c.exact);
    else
        j["exact"] = nullptr;
    j["sub_lim1"] = to_string(c.sub);
    j["interchange_lim1"] = to_string(c.interchange);
    j["quotient"] = to_json(c.quotient);
    if (!c.flags.empty()) j["flags"] = c.flags;
    return j;
}

Json to_json(const E2Page& p) {
    Json cells = Json::array();
    for (const auto& c : p.cells) cells.push_back(to_json(c));
    return Json{{"s_max", p.s_max}, {"t_min", p.t_min}, {"t_max", p.t_max},
                {"cells", std::move(cells)}};
}

Json to_json(const E2Comparison& c) {
    Json cells = Json::array();
    for (const auto& cc : c.cells) {
        Json cj{{"s", cc.s}, {"t", cc.t}};
        switch (cc.verdict) {
            case CellVerdict::equal: cj["verdict"] = "equal"; break;
            case CellVerdict::differs: cj["verdict"] = "differs"; break;
            default: cj["verdict"] = "undetermined"; break;
        }
        cj["ml_asserted"] = cc.ml_asserted;
        if (!cc.detail.empty()) cj["detail"] = cc.detail;
        cells.push_back(std::move(cj));
    }
    return Json{{"descent", to_json(c.descent)},
                {"jannsen", to_json(c.jannsen)},
                {"cells", std::move(cells)},
                {"all_equal", c.all_equal()}};
}

Json to_json(const CounterexampleReport& r) {
    Json degrees = Json::array();
    for (size_t s = 0; s < r.by_degree.size(); ++s) {
        Json d = to_json(r.by_degree[s]);
        d["s"] = static_cast<int>(s);
        degrees.push_back(std::move(d));
    }
    return Json{{"by_degree", std::move(degrees)},
                {"lim1_of_tower", to_string(r.lim1_of_tower)},
                {"fixed_point_limit", to_json(r.fixed_point_limit)},
                {"high_degrees_vanish", r.high_degrees_vanish},
                {"degree_one_matches_lim1", r.degree_one_matches_lim1},
                {"degree_zero_matches_fixed_points", r.degree_zero_matches_fixed_points},
                {"passed", r.passed()}};
}

Json to_json(const ComparisonReport& r) {
    Json j;
    if (r.agree)
        j["agree"] = *r.agree;
    else
        j["agree"] = "undetermined";
    j["details"] = r.details;
    j["cts"] = to_json(r.cts);
    j["cont"] = to_json(r.cont);
    return j;
}

}  // namespace prodesc
