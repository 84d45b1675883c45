#pragma once

// JSON forms of the result types (nlohmann::json ADL hooks).

#include <nlohmann/json.hpp>

#include "yamabe/energy.hpp"
#include "yamabe/hessian.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/solver.hpp"
#include "yamabe/stability.hpp"

namespace yamabe {

void to_json(nlohmann::json& j, const Manifold& m);
void to_json(nlohmann::json& j, const EnergyReport& r);
void to_json(nlohmann::json& j, const Spectrum& s);
void to_json(nlohmann::json& j, const ReducedModel& m);
void to_json(nlohmann::json& j, const CriticalPoint& c);
void to_json(nlohmann::json& j, const BifurcationDiagram& d);
void to_json(nlohmann::json& j, const StabilityFit& f);
void to_json(nlohmann::json& j, const SuperquadraticFamily& f);
void to_json(nlohmann::json& j, const LojasiewiczResult& r);
void to_json(nlohmann::json& j, const Decomposition& d);

nlohmann::json vector_json(const Eigen::VectorXd& v);

}  // namespace yamabe
