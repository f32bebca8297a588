#include "sinespike/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "golden.hpp"

namespace sinespike {

namespace {

double window_value(Window w, int l, int n) {
    if (n < 2) return 1.0;
    const double c = std::cos(kTwoPi * (l - 1) / (n - 1));
    switch (w) {
    case Window::Hann: return 0.5 - 0.5 * c;
    case Window::Hamming: return 0.54 - 0.46 * c;
    default: return 1.0;
    }
}

} // namespace

Periodogram periodogram(const CVector& y, const PeriodogramConfig& cfg) {
    const int n = static_cast<int>(y.size());
    require(n >= 1, "periodogram: empty data");
    const int G = cfg.grid_size > 0 ? cfg.grid_size : 16 * n;
    require(G >= 4 * n, "periodogram: grid must have at least 4n points");
    require(cfg.peak_rel_threshold > 0.0 && cfg.peak_rel_threshold <= 1.0, "periodogram: threshold must lie in (0, 1]");
    CVector yw(n);
    double wsum = 0.0;
    for (int l = 1; l <= n; ++l) {
        const double w = window_value(cfg.window, l, n);
        yw[l - 1] = w * y[l - 1];
        wsum += w;
    }
    const auto grid = detail::eval_dual_grid(yw, G);
    Periodogram p;
    p.magnitude.resize(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) p.magnitude[static_cast<std::size_t>(g)] = std::abs(grid[static_cast<std::size_t>(g)]) / wsum;
    const double top = *std::max_element(p.magnitude.begin(), p.magnitude.end());
    std::vector<std::pair<double, double>> peaks;
    for (int g = 0; g < G; ++g) {
        const double v = p.magnitude[static_cast<std::size_t>(g)];
        const double prev = p.magnitude[static_cast<std::size_t>((g + G - 1) % G)];
        const double next = p.magnitude[static_cast<std::size_t>((g + 1) % G)];
        if (top > 0.0 && v >= cfg.peak_rel_threshold * top && v > prev && v >= next)
            peaks.emplace_back(v, static_cast<double>(g) / G);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& pk : peaks) p.peaks.push_back(pk.second);
    return p;
}

MusicResult music(const CVector& y, int k, int subarray, int grid_size) {
    const int n = static_cast<int>(y.size());
    require(k >= 1, "music: model order must be positive");
    if (2 * k >= n) fail(ErrorCode::InvalidArgument, "music: model order too large (need k < n/2)");
    const int L = subarray > 0 ? subarray : n / 2;
    const int cols = n - L + 1;
    if (L <= k || cols <= k) fail(ErrorCode::InvalidArgument, "music: subarray length leaves no noise subspace");
    const int G = grid_size > 0 ? grid_size : 64 * n;
    require(G >= 4 * n, "music: grid must have at least 4n points");

    CMatrix H(L, cols);
    for (int a = 0; a < L; ++a)
        for (int b = 0; b < cols; ++b) H(a, b) = y[a + b];
    Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullU);
    const CMatrix Un = svd.matrixU().rightCols(L - k);

    std::vector<double> denom(static_cast<std::size_t>(G), 0.0);
    for (Eigen::Index c = 0; c < Un.cols(); ++c) {
        std::vector<cplx> col(static_cast<std::size_t>(L));
        for (int a = 0; a < L; ++a) col[static_cast<std::size_t>(a)] = Un(a, c);
        const auto v = detail::dft(col, G, -1);
        for (int g = 0; g < G; ++g) denom[static_cast<std::size_t>(g)] += std::norm(v[static_cast<std::size_t>(g)]);
    }
    auto noise_energy = [&](double f) {
        CVector a(L);
        for (int i = 0; i < L; ++i) a[i] = cis2pi(f * i);
        return (Un.adjoint() * a).squaredNorm();
    };

    MusicResult res;
    res.pseudospectrum.resize(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) res.pseudospectrum[static_cast<std::size_t>(g)] = 1.0 / std::max(denom[static_cast<std::size_t>(g)], 1e-300);
    std::vector<std::pair<double, int>> minima;
    for (int g = 0; g < G; ++g) {
        const double v = denom[static_cast<std::size_t>(g)];
        if (v <= denom[static_cast<std::size_t>((g + G - 1) % G)] && v < denom[static_cast<std::size_t>((g + 1) % G)])
            minima.emplace_back(v, g);
    }
    std::sort(minima.begin(), minima.end());
    for (std::size_t i = 0; i < minima.size() && static_cast<int>(res.freqs.size()) < k; ++i) {
        const double f0 = static_cast<double>(minima[i].second) / G;
        const double f = detail::golden_max([&](double t) { return -noise_energy(t); }, f0 - 1.0 / G, f0 + 1.0 / G);
        res.freqs.push_back(wrap_unit(f));
    }
    std::sort(res.freqs.begin(), res.freqs.end());
    return res;
}

} // namespace sinespike
