#pragma once
#include <map>
#include <memory>
#include <string>

#include "json.hpp"
#include "prodesc/descent.hpp"

namespace prodesc {

using Json = nlohmann::ordered_json;

// Parsed "prodesc/1" problem file: named objects plus an optional list of
// requested computations.
struct ProblemFile {
    std::map<std::string, FiniteGroup> groups;
    std::map<std::string, std::shared_ptr<const ProfiniteTower>> towers;
    std::map<std::string, DiscreteGModule> modules;
    std::map<std::string, ModuleTower> module_towers;
    std::map<std::string, GComplexTower> complex_towers;
    Json requests = Json::array();
};

ProblemFile parse_problem(const Json& j);
ProblemFile load_problem(const std::string& path);

SparseMat matrix_from_json(const Json& j, int rows, int cols, const std::string& where);
Json matrix_to_json(const SparseMat& m);

Json to_json(const FgAbGroup& g);
Json to_json(const MlStatus& s);
const char* to_string(Lim1 l);
Json to_json(const ProGroup& p);
Json to_json(const AssembledCohomology& a);
Json to_json(const StabilizedColimit& c);
Json to_json(const E2Cell& c);
Json to_json(const E2Page& p);
Json to_json(const E2Comparison& c);
Json to_json(const CounterexampleReport& r);
Json to_json(const ComparisonReport& r);

}  // namespace prodesc
