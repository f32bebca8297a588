#pragma once

#include <vector>

#include "sinespike/decode.hpp"

namespace sinespike {

struct GreedyConfig {
    double tau = -1.0;          // negative selects 1e-6 |y|_2 / sqrt(n)
    int fft_oversample = 32;
    int max_atoms = 0;          // 0 selects n
    int max_outer_iters = 0;    // 0 selects 2n
    double simplex_tol = 1e-12; // simplex diameter in frequency units
    int simplex_max_evals = 0;  // 0 selects 2000 + 600 k per run
    bool local_opt = true;
};

enum class AtomKind { Sine, Spike };

struct Atom {
    AtomKind kind = AtomKind::Sine;
    double freq = 0.0;
    int index = 0; // 1..n for spikes
    double correlation = 0.0;
};

/// Best-correlated dictionary atom; sine atoms are unit-norm (1/sqrt(n) scaling).
Atom correlation_scan(const CVector& residual, const GreedyConfig& cfg = {});

struct GreedyTraceEntry {
    int iter = 0;
    double residual = 0.0;
    int n_sines = 0;
    int n_spikes = 0;
    Atom selected;
};

struct GreedyResult {
    std::vector<double> freqs;
    CVector x;
    std::vector<int> omega;
    CVector z;
    std::vector<GreedyTraceEntry> trace;
    bool converged = false;
    Estimate estimate;
};

GreedyResult greedy_demix(const CVector& y, const GreedyConfig& cfg = {});

/// Simplex search on the least-squares cost over the frequencies; never returns a worse point.
std::vector<double> local_optimize(const CVector& y, const std::vector<double>& T_hat,
                                   const std::vector<int>& omega_hat, const GreedyConfig& cfg = {});

} // namespace sinespike
