#pragma once

#include <functional>
#include <vector>

#include "sinespike/admm.hpp"
#include "sinespike/model.hpp"

namespace sinespike {

struct DecodeConfig {
    double eta_tol = 1e-3;
    double poly_tol = 1e-3;
    int grid_oversample = 16;
    double cluster_radius = 0.0; // 0 selects 0.25 / n
};

struct Supports {
    std::vector<double> freqs;
    std::vector<int> omega; // sample indices 1..n
};

Supports decode_supports(const CVector& eta, double lambda, const DecodeConfig& cfg = {});

enum class AmplitudeMode { Joint, Masked };

struct Estimate {
    LineSpectrum spectrum;
    SpikeVector spikes;
};

Estimate amplitude_ls(const CVector& y, const std::vector<double>& T_hat, const std::vector<int>& omega_hat,
                      AmplitudeMode mode = AmplitudeMode::Joint);

/// Drops lines and spikes below rel * (largest amplitude), then refits.
Estimate prune_and_refit(const CVector& y, const Estimate& est, double rel = 1e-6,
                         AmplitudeMode mode = AmplitudeMode::Joint);

struct DemixConfig {
    AdmmConfig admm;
    DecodeConfig decode;
    AmplitudeMode mode = AmplitudeMode::Joint;
    bool polish = true; // Gauss-Newton refinement of decoded frequencies in equality mode
};

struct DemixResult {
    SolveReport solve;
    Supports decoded;
    Estimate estimate;
};

/// ADMM, support decoding, amplitude least squares and pruning.
DemixResult demix(const CVector& y, const DemixConfig& cfg);

using Solver = std::function<Estimate(const CVector&)>;

/// Removes the lines and spikes not listed (indices into the instance's spectrum lines and
/// spike support), reruns the solver and reports exact demixing of the trimmed instance.
bool trimming_check(const Instance& inst, const Solver& solver, const std::vector<std::size_t>& keep_lines,
                    const std::vector<int>& keep_spikes);

} // namespace sinespike
