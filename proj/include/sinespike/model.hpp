#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sinespike/types.hpp"

namespace sinespike {

struct SpectralLine {
    double freq = 0.0;
    cplx amp{0.0, 0.0};
};

/// Atomic measure on [0,1): sorted, pairwise-distinct frequencies with complex amplitudes.
class LineSpectrum {
public:
    LineSpectrum() = default;
    /// Validates and sorts. Throws on frequencies outside [0,1) or duplicates.
    explicit LineSpectrum(std::vector<SpectralLine> lines);

    const std::vector<SpectralLine>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    std::vector<double> frequencies() const;
    CVector amplitudes() const;
    double tv_norm() const;

private:
    std::vector<SpectralLine> lines_;
};

/// Sparse outlier vector over sample indices 1..n. Zero amplitudes are never stored.
class SpikeVector {
public:
    SpikeVector() = default;
    explicit SpikeVector(int n);
    SpikeVector(int n, const std::map<int, cplx>& values);

    int n() const { return n_; }
    const std::map<int, cplx>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    std::vector<int> support() const;
    /// Dense length-n vector, entry l-1 holds the value at index l.
    CVector dense() const;
    double l1_norm() const;

    static SpikeVector from_dense(const CVector& v);

private:
    int n_ = 0;
    std::map<int, cplx> values_;
};

enum class AmplitudeLaw { UnitPhase, ComplexGaussian };
enum class OutlierSupport { FixedCardinality, Bernoulli };

struct GenerationParams {
    int n = 61;
    int k = 5;
    int s = 10;
    double delta_min = 0.0;
    AmplitudeLaw amp_law = AmplitudeLaw::UnitPhase;
    OutlierSupport support_mode = OutlierSupport::FixedCardinality;
    double noise_level = 0.0;
    std::uint64_t seed = 0;
};

struct Instance {
    LineSpectrum spectrum;
    SpikeVector spikes;
    CVector dense_noise;
    CVector y;
    GenerationParams params;
    bool has_truth = true; // false for raw data read without ground truth
    int n() const { return static_cast<int>(y.size()); }
    /// Noiseless spectral part F_n mu.
    CVector clean() const;
};

/// Samples sum_j x_j e^{i 2 pi f_j l} at l = 1..n.
CVector forward(const LineSpectrum& spectrum, int n);

double wrap_distance(double a, double b);
double min_separation(std::span<const double> freqs);

Instance generate_instance(const GenerationParams& p);

/// Builds an instance from explicit parts; y is recomputed.
Instance make_instance(LineSpectrum spectrum, SpikeVector spikes, const CVector& dense_noise);

Instance picket_fence(int n);

struct RecoveryScore {
    double relative_mse = 0.0;
    double hausdorff = 0.0;
    bool spike_support_match = false;
    bool exact_demix = false;
};

RecoveryScore recovery_score(const Instance& truth, const LineSpectrum& est_spectrum,
                             const SpikeVector& est_spikes);

/// Hausdorff distance between two frequency sets under wrap-around distance.
double hausdorff_distance(std::span<const double> a, std::span<const double> b);

} // namespace sinespike
