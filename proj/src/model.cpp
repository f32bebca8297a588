#include "sinespike/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sinespike {

LineSpectrum::LineSpectrum(std::vector<SpectralLine> lines) : lines_(std::move(lines)) {
    for (const auto& l : lines_) {
        require(std::isfinite(l.freq) && l.freq >= 0.0 && l.freq < 1.0,
                "line spectrum frequency outside [0,1): " + std::to_string(l.freq));
        require(std::isfinite(l.amp.real()) && std::isfinite(l.amp.imag()), "non-finite amplitude");
    }
    std::sort(lines_.begin(), lines_.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.freq < b.freq; });
    for (std::size_t j = 1; j < lines_.size(); ++j)
        require(lines_[j].freq != lines_[j - 1].freq, "duplicate frequency in line spectrum");
}

std::vector<double> LineSpectrum::frequencies() const {
    std::vector<double> f;
    f.reserve(lines_.size());
    for (const auto& l : lines_) f.push_back(l.freq);
    return f;
}

CVector LineSpectrum::amplitudes() const {
    CVector a(static_cast<Eigen::Index>(lines_.size()));
    for (std::size_t j = 0; j < lines_.size(); ++j) a[static_cast<Eigen::Index>(j)] = lines_[j].amp;
    return a;
}

double LineSpectrum::tv_norm() const {
    double s = 0.0;
    for (const auto& l : lines_) s += std::abs(l.amp);
    return s;
}

SpikeVector::SpikeVector(int n) : n_(n) { require(n >= 1, "spike vector length must be positive"); }

SpikeVector::SpikeVector(int n, const std::map<int, cplx>& values) : SpikeVector(n) {
    for (const auto& [l, v] : values) {
        require(l >= 1 && l <= n, "spike index outside 1..n: " + std::to_string(l));
        if (v != cplx(0.0, 0.0)) values_.emplace(l, v);
    }
}

std::vector<int> SpikeVector::support() const {
    std::vector<int> s;
    s.reserve(values_.size());
    for (const auto& kv : values_) s.push_back(kv.first);
    return s;
}

CVector SpikeVector::dense() const {
    CVector v = CVector::Zero(n_);
    for (const auto& [l, a] : values_) v[l - 1] = a;
    return v;
}

double SpikeVector::l1_norm() const {
    double s = 0.0;
    for (const auto& kv : values_) s += std::abs(kv.second);
    return s;
}

SpikeVector SpikeVector::from_dense(const CVector& v) {
    std::map<int, cplx> m;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] != cplx(0.0, 0.0)) m.emplace(static_cast<int>(i) + 1, v[i]);
    return SpikeVector(static_cast<int>(v.size()), m);
}

CVector Instance::clean() const { return forward(spectrum, n()); }

CVector forward(const LineSpectrum& spectrum, int n) {
    require(n >= 1, "forward: n must be positive");
    CVector out = CVector::Zero(n);
    for (const auto& line : spectrum.lines())
        for (int l = 1; l <= n; ++l) out[l - 1] += line.amp * cis2pi(line.freq * l);
    return out;
}

double wrap_distance(double a, double b) {
    double d = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

double min_separation(std::span<const double> freqs) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < freqs.size(); ++i)
        for (std::size_t j = i + 1; j < freqs.size(); ++j)
            best = std::min(best, wrap_distance(freqs[i], freqs[j]));
    return best;
}

namespace {

constexpr long kMaxAttempts = 1000000;
constexpr long kAttemptsPerRestart = 2000;

std::vector<double> draw_frequencies(int k, double delta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> freqs;
    long attempts = 0;
    long since_progress = 0;
    while (static_cast<int>(freqs.size()) < k) {
        if (++attempts > kMaxAttempts)
            fail(ErrorCode::Infeasible, "frequency rejection sampling exhausted its attempt budget");
        const double f = unif(rng);
        bool ok = true;
        for (double g : freqs)
            if (wrap_distance(f, g) < delta) {
                ok = false;
                break;
            }
        if (ok) {
            freqs.push_back(f);
            since_progress = 0;
        } else if (++since_progress > kAttemptsPerRestart) {
            freqs.clear();
            since_progress = 0;
        }
    }
    return freqs;
}

cplx draw_amplitude(AmplitudeLaw law, std::mt19937_64& rng) {
    if (law == AmplitudeLaw::UnitPhase) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        return cis2pi(unif(rng));
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace

Instance generate_instance(const GenerationParams& p) {
    require(p.n >= 2, "generate_instance: n must be at least 2");
    require(p.k >= 0 && p.s >= 0, "generate_instance: k and s must be nonnegative");
    require(p.s <= p.n, "generate_instance: s must not exceed n");
    require(p.noise_level >= 0.0, "generate_instance: noise level must be nonnegative");
    require(p.delta_min >= 0.0, "generate_instance: delta_min must be nonnegative");
    if (p.k > 0 && p.k * p.delta_min >= 1.0)
        fail(ErrorCode::Infeasible, "generate_instance: k * delta_min >= 1, no separated support exists");

    std::mt19937_64 rng(p.seed);
    const auto freqs = draw_frequencies(p.k, p.delta_min, rng);
    std::vector<SpectralLine> lines;
    for (double f : freqs) lines.push_back({f, draw_amplitude(p.amp_law, rng)});

    std::vector<int> idx(p.n);
    for (int l = 0; l < p.n; ++l) idx[l] = l + 1;
    std::vector<int> support;
    if (p.support_mode == OutlierSupport::FixedCardinality) {
        std::shuffle(idx.begin(), idx.end(), rng);
        support.assign(idx.begin(), idx.begin() + p.s);
    } else {
        std::bernoulli_distribution coin(static_cast<double>(p.s) / p.n);
        for (int l : idx)
            if (coin(rng)) support.push_back(l);
    }
    std::sort(support.begin(), support.end());
    std::map<int, cplx> spikes;
    for (int l : support) spikes.emplace(l, draw_amplitude(p.amp_law, rng));

    CVector noise = CVector::Zero(p.n);
    if (p.noise_level > 0.0) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int l = 0; l < p.n; ++l) {
            const double re = normal(rng);
            const double im = normal(rng);
            noise[l] = cplx(re, im);
        }
        noise *= p.noise_level / noise.norm();
    }

    Instance inst = make_instance(LineSpectrum(std::move(lines)), SpikeVector(p.n, spikes), noise);
    inst.params = p;
    return inst;
}

Instance make_instance(LineSpectrum spectrum, SpikeVector spikes, const CVector& dense_noise) {
    const int n = spikes.n();
    require(n >= 2, "instance needs at least two samples");
    require(dense_noise.size() == n, "dense noise length must equal n");
    Instance inst;
    inst.spectrum = std::move(spectrum);
    inst.spikes = std::move(spikes);
    inst.dense_noise = dense_noise;
    inst.y = forward(inst.spectrum, n) + inst.spikes.dense() + dense_noise;
    inst.params.n = n;
    inst.params.k = static_cast<int>(inst.spectrum.size());
    inst.params.s = static_cast<int>(inst.spikes.size());
    inst.params.delta_min = min_separation(inst.spectrum.frequencies());
    if (!std::isfinite(inst.params.delta_min)) inst.params.delta_min = 0.0;
    inst.params.noise_level = dense_noise.norm();
    return inst;
}

Instance picket_fence(int n) {
    const int kp = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    require(n >= 4 && kp * kp == n, "picket_fence: n must be a perfect square k'^2 with k' >= 2");
    std::vector<SpectralLine> lines;
    for (int j = 0; j < kp; ++j) lines.push_back({static_cast<double>(j) / kp, cplx(1.0 / kp, 0.0)});
    LineSpectrum spectrum(std::move(lines));

    // Samples of the fence are exactly 1 at multiples of k' and 0 elsewhere, so the
    // data are written in closed form rather than summed in floating point.
    std::map<int, cplx> spikes;
    for (int l = kp; l <= n; l += kp) spikes.emplace(l, cplx(-1.0, 0.0));

    Instance inst;
    inst.spectrum = std::move(spectrum);
    inst.spikes = SpikeVector(n, spikes);
    inst.dense_noise = CVector::Zero(n);
    inst.y = CVector::Zero(n);
    inst.params.n = n;
    inst.params.k = kp;
    inst.params.s = kp;
    inst.params.delta_min = 1.0 / kp;
    return inst;
}

double hausdorff_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return 0.5;
    auto directed = [](std::span<const double> p, std::span<const double> q) {
        double worst = 0.0;
        for (double x : p) {
            double best = 1.0;
            for (double z : q) best = std::min(best, wrap_distance(x, z));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

RecoveryScore recovery_score(const Instance& truth, const LineSpectrum& est_spectrum,
                             const SpikeVector& est_spikes) {
    const int n = truth.n();
    require(est_spikes.n() == n, "recovery_score: dimension mismatch between truth and estimate");
    RecoveryScore sc;
    const CVector g = truth.clean();
    const CVector gh = forward(est_spectrum, n);
    const double gn = g.norm();
    if (gn > 0.0)
        sc.relative_mse = (g - gh).norm() / gn;
    else
        sc.relative_mse = gh.norm() > 0.0 ? 1.0 : 0.0;
    const auto ft = truth.spectrum.frequencies();
    const auto fe = est_spectrum.frequencies();
    sc.hausdorff = hausdorff_distance(ft, fe);
    sc.spike_support_match = truth.spikes.support() == est_spikes.support();
    const bool freq_match = ft.size() == fe.size() && sc.hausdorff <= 1e-4 / n;
    sc.exact_demix = sc.relative_mse < 1e-8 && freq_match && sc.spike_support_match;
    return sc;
}

} // namespace sinespike
