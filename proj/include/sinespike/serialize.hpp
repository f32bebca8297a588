#pragma once

#include <json.hpp>

#include "sinespike/admm.hpp"
#include "sinespike/baselines.hpp"
#include "sinespike/certificate.hpp"
#include "sinespike/decode.hpp"
#include "sinespike/experiment.hpp"
#include "sinespike/greedy.hpp"
#include "sinespike/model.hpp"

namespace sinespike {

using json = nlohmann::json;

json complex_array(const CVector& v);
CVector complex_array_from(const json& j);

json to_json(const GenerationParams& p);
GenerationParams params_from_json(const json& j);

json to_json(const LineSpectrum& s);
json to_json(const SpikeVector& s);
json to_json(const Instance& inst);
/// Accepts either a full instance or raw data {"y": [...]} without ground truth.
Instance instance_from_json(const json& j);

json to_json(const RecoveryScore& s);
json to_json(const SolveReport& r, bool traces = false);
json to_json(const Supports& s);
json to_json(const Estimate& e);
json to_json(const DemixResult& r, bool traces = false);
json to_json(const CertificateReport& r);
json to_json(const DualPolynomial& p);
json to_json(const GreedyResult& r);
json to_json(const GridResult& r);

ExperimentGrid grid_from_json(const json& j);
json to_json(const ExperimentGrid& g);

AdmmConfig admm_config_from_json(const json& j, AdmmConfig base = {});
GreedyConfig greedy_config_from_json(const json& j, GreedyConfig base = {});
DecodeConfig decode_config_from_json(const json& j, DecodeConfig base = {});

} // namespace sinespike
