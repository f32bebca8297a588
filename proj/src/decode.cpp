#include "sinespike/decode.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "golden.hpp"
#include "linefit.hpp"

namespace sinespike {

Supports decode_supports(const CVector& eta, double lambda, const DecodeConfig& cfg) {
    const int n = static_cast<int>(eta.size());
    require(n >= 1, "decode_supports: empty dual vector");
    require(lambda > 0.0, "decode_supports: lambda must be positive");
    require(cfg.eta_tol > 0.0 && cfg.eta_tol < 0.5 && cfg.poly_tol > 0.0 && cfg.poly_tol < 0.5,
            "decode_supports: tolerances must lie in (0, 0.5)");
    require(cfg.grid_oversample >= 16, "decode_supports: grid oversampling must be at least 16");
    Supports out;
    for (int l = 1; l <= n; ++l)
        if (std::abs(eta[l - 1]) >= lambda * (1.0 - cfg.eta_tol)) out.omega.push_back(l);

    const int G = cfg.grid_oversample * n;
    const auto grid = detail::eval_dual_grid(eta, G);
    std::vector<double> mag(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) mag[g] = std::abs(grid[g]);

    struct Peak {
        double f;
        double value;
    };
    std::vector<Peak> peaks;
    const double prefilter = 1.0 - cfg.poly_tol - 0.05;
    auto absq = [&](double f) { return std::abs(detail::eval_dual(eta, f)); };
    for (int g = 0; g < G; ++g) {
        const double v = mag[static_cast<std::size_t>(g)];
        const double prev = mag[static_cast<std::size_t>((g + G - 1) % G)];
        const double next = mag[static_cast<std::size_t>((g + 1) % G)];
        if (v < prefilter || v < prev || v <= next) continue;
        const double f0 = static_cast<double>(g) / G;
        const double f = detail::golden_max(absq, f0 - 1.0 / G, f0 + 1.0 / G);
        const double val = absq(f);
        if (val >= 1.0 - cfg.poly_tol) peaks.push_back({wrap_unit(f), val});
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.f < b.f; });

    const double radius = cfg.cluster_radius > 0.0 ? cfg.cluster_radius : 0.25 / n;
    std::vector<Peak> merged;
    for (const auto& p : peaks) {
        if (!merged.empty() && wrap_distance(merged.back().f, p.f) <= radius) {
            if (p.value > merged.back().value) merged.back() = p;
        } else {
            merged.push_back(p);
        }
    }
    if (merged.size() > 1 && wrap_distance(merged.front().f, merged.back().f) <= radius) {
        if (merged.back().value > merged.front().value) merged.front() = merged.back();
        merged.pop_back();
    }
    for (const auto& p : merged) out.freqs.push_back(p.f);
    std::sort(out.freqs.begin(), out.freqs.end());
    return out;
}

namespace {

Estimate to_estimate(int n, const std::vector<double>& freqs, const std::vector<int>& omega,
                     const detail::LineFit& fit) {
    std::vector<SpectralLine> lines;
    for (std::size_t j = 0; j < freqs.size(); ++j) lines.push_back({wrap_unit(freqs[j]), fit.x[static_cast<Eigen::Index>(j)]});
    std::map<int, cplx> spikes;
    for (std::size_t c = 0; c < omega.size(); ++c) spikes.emplace(omega[c], fit.z[static_cast<Eigen::Index>(c)]);
    return {LineSpectrum(std::move(lines)), SpikeVector(n, spikes)};
}

} // namespace

Estimate amplitude_ls(const CVector& y, const std::vector<double>& T_hat, const std::vector<int>& omega_hat,
                      AmplitudeMode mode) {
    const int n = static_cast<int>(y.size());
    require(n >= 2, "amplitude_ls: need at least two samples");
    std::vector<int> omega = omega_hat;
    std::sort(omega.begin(), omega.end());
    require(std::adjacent_find(omega.begin(), omega.end()) == omega.end(), "amplitude_ls: duplicate outlier index");
    const auto fit = mode == AmplitudeMode::Joint ? detail::fit_joint(y, T_hat, omega) : detail::fit_masked(y, T_hat, omega);
    return to_estimate(n, T_hat, omega, fit);
}

Estimate prune_and_refit(const CVector& y, const Estimate& est, double rel, AmplitudeMode mode) {
    double top = 0.0;
    for (const auto& l : est.spectrum.lines()) top = std::max(top, std::abs(l.amp));
    for (const auto& kv : est.spikes.values()) top = std::max(top, std::abs(kv.second));
    const double thr = rel * top;
    std::vector<double> freqs;
    std::vector<int> omega;
    bool dropped = false;
    for (const auto& l : est.spectrum.lines()) {
        if (std::abs(l.amp) >= thr && top > 0.0)
            freqs.push_back(l.freq);
        else
            dropped = true;
    }
    for (const auto& kv : est.spikes.values()) {
        if (std::abs(kv.second) >= thr && top > 0.0)
            omega.push_back(kv.first);
        else
            dropped = true;
    }
    if (!dropped) return est;
    return amplitude_ls(y, freqs, omega, mode);
}

DemixResult demix(const CVector& y, const DemixConfig& cfg) {
    const int n = static_cast<int>(y.size());
    DemixResult res;
    res.solve = admm_solve(y, cfg.admm);
    res.decoded = decode_supports(res.solve.eta, res.solve.lambda, cfg.decode);
    const auto& T = res.decoded.freqs;
    const auto& O = res.decoded.omega;
    try {
        res.estimate = amplitude_ls(y, T, O, cfg.mode);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Singular && e.code() != ErrorCode::InvalidArgument) throw;
        // Decoded supports too large or degenerate for a unique fit: keep the outliers only.
        std::map<int, cplx> spikes;
        for (int l : O) spikes.emplace(l, y[l - 1]);
        res.estimate = {LineSpectrum(), SpikeVector(n, spikes)};
        return res;
    }
    res.estimate = prune_and_refit(y, res.estimate, 1e-6, cfg.mode);
    if (!cfg.polish || !cfg.admm.equality_mode()) return res;
    // Spurious lines often hold amplitude only until the true ones are in place, so polish
    // and prune alternate until the support stops shrinking.
    for (int round = 0; round < 4 && !res.estimate.spectrum.empty(); ++round) {
        auto freqs = res.estimate.spectrum.frequencies();
        const auto omega = res.estimate.spikes.support();
        detail::polish_frequencies(y, freqs, omega, 0.5 / n);
        std::sort(freqs.begin(), freqs.end());
        if (std::adjacent_find(freqs.begin(), freqs.end()) != freqs.end()) break;
        try {
            res.estimate = amplitude_ls(y, freqs, omega, cfg.mode);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Singular) throw;
            break;
        }
        const std::size_t before = res.estimate.spectrum.size() + res.estimate.spikes.support().size();
        res.estimate = prune_and_refit(y, res.estimate, 1e-6, cfg.mode);
        if (res.estimate.spectrum.size() + res.estimate.spikes.support().size() == before) break;
    }
    return res;
}

bool trimming_check(const Instance& inst, const Solver& solver, const std::vector<std::size_t>& keep_lines,
                    const std::vector<int>& keep_spikes) {
    std::vector<SpectralLine> lines;
    for (std::size_t j : keep_lines) {
        require(j < inst.spectrum.size(), "trimming_check: line index outside the spectrum");
        lines.push_back(inst.spectrum.lines()[j]);
    }
    std::map<int, cplx> spikes;
    for (int l : keep_spikes) {
        auto it = inst.spikes.values().find(l);
        require(it != inst.spikes.values().end(), "trimming_check: spike index outside the true support");
        spikes.emplace(l, it->second);
    }
    const Instance trimmed = make_instance(LineSpectrum(std::move(lines)), SpikeVector(inst.n(), spikes), inst.dense_noise);
    const Estimate est = solver(trimmed.y);
    return recovery_score(trimmed, est.spectrum, est.spikes).exact_demix;
}

} // namespace sinespike
