#pragma once

#include <vector>

#include "sinespike/types.hpp"

namespace sinespike {

enum class Window { None, Hann, Hamming };

struct PeriodogramConfig {
    Window window = Window::None;
    int grid_size = 0;                // 0 selects 16 n
    double peak_rel_threshold = 0.1;  // relative to the largest magnitude
};

struct Periodogram {
    std::vector<double> magnitude; // at f = j / grid_size
    std::vector<double> peaks;     // peak frequencies, descending magnitude
};

Periodogram periodogram(const CVector& y, const PeriodogramConfig& cfg = {});

struct MusicResult {
    std::vector<double> freqs;          // ascending
    std::vector<double> pseudospectrum; // at f = j / grid_size
};

/// Spectral MUSIC on the Hankel data matrix with subarray length L (0 selects floor(n/2)).
MusicResult music(const CVector& y, int k, int subarray = 0, int grid_size = 0);

} // namespace sinespike
