#include "sinespike/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "golden.hpp"
#include "linefit.hpp"

namespace sinespike {

Atom correlation_scan(const CVector& residual, const GreedyConfig& cfg) {
    const int n = static_cast<int>(residual.size());
    require(n >= 1, "correlation_scan: empty residual");
    require(cfg.fft_oversample >= 8, "correlation_scan: oversampling must be at least 8");
    Eigen::Index imax = 0;
    const double spike_corr = residual.cwiseAbs().maxCoeff(&imax);
    require(spike_corr > 0.0, "correlation_scan: residual is zero");

    const int G = cfg.fft_oversample * n;
    const auto grid = detail::eval_dual_grid(residual, G);
    int gbest = 0;
    for (int g = 1; g < G; ++g)
        if (std::abs(grid[static_cast<std::size_t>(g)]) > std::abs(grid[static_cast<std::size_t>(gbest)])) gbest = g;
    const double sqn = std::sqrt(static_cast<double>(n));
    auto corr = [&](double f) { return std::abs(detail::eval_dual(residual, f)) / sqn; };
    const double f0 = static_cast<double>(gbest) / G;
    const double f = detail::golden_max(corr, f0 - 1.0 / G, f0 + 1.0 / G);
    const double sine_corr = corr(f);

    Atom a;
    if (sine_corr > spike_corr) {
        a.kind = AtomKind::Sine;
        a.freq = wrap_unit(f);
        a.correlation = sine_corr;
    } else {
        a.kind = AtomKind::Spike;
        a.index = static_cast<int>(imax) + 1;
        a.correlation = spike_corr;
    }
    return a;
}

namespace {

double wrapped_cost(const CVector& y, const std::vector<double>& f, const std::vector<int>& omega) {
    std::vector<double> w(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) w[j] = wrap_unit(f[j]);
    return detail::ls_cost(y, w, omega);
}

// Nelder-Mead with coefficients (1, 2, 1/2, 1/2). Returns the best vertex.
std::vector<double> nelder_mead(const CVector& y, const std::vector<int>& omega, std::vector<double> x0,
                                double& fbest, double radius, double tol, int max_evals) {
    const std::size_t k = x0.size();
    std::vector<std::vector<double>> simplex(k + 1, x0);
    for (std::size_t i = 0; i < k; ++i) simplex[i + 1][i] += radius;
    std::vector<double> fv(k + 1);
    int evals = 0;
    for (std::size_t i = 0; i <= k; ++i) {
        fv[i] = wrapped_cost(y, simplex[i], omega);
        ++evals;
    }
    std::vector<std::size_t> order(k + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[k - 1];
        double diam = 0.0;
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = 0; j < k; ++j) diam = std::max(diam, std::fabs(simplex[i][j] - simplex[best][j]));
        if (diam < tol || fv[best] == 0.0) break;

        std::vector<double> centroid(k, 0.0);
        for (std::size_t i = 0; i <= k; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < k; ++j) centroid[j] += simplex[i][j] / static_cast<double>(k);
        auto along = [&](double t) {
            std::vector<double> p(k);
            for (std::size_t j = 0; j < k; ++j) p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            return p;
        };
        const auto xr = along(-1.0);
        const double fr = wrapped_cost(y, xr, omega);
        ++evals;
        if (fr < fv[best]) {
            const auto xe = along(-2.0);
            const double fe = wrapped_cost(y, xe, omega);
            ++evals;
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = wrapped_cost(y, xc, omega);
        ++evals;
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= k; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < k; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            fv[i] = wrapped_cost(y, simplex[i], omega);
            ++evals;
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    fbest = *it;
    return simplex[static_cast<std::size_t>(it - fv.begin())];
}

} // namespace

std::vector<double> local_optimize(const CVector& y, const std::vector<double>& T_hat, const std::vector<int>& omega_hat,
                                   const GreedyConfig& cfg) {
    require(!T_hat.empty(), "local_optimize: frequency set must be nonempty");
    const int n = static_cast<int>(y.size());
    const int max_evals = cfg.simplex_max_evals > 0 ? cfg.simplex_max_evals
                                                    : 2000 + 600 * static_cast<int>(T_hat.size());
    double best = wrapped_cost(y, T_hat, omega_hat);
    std::vector<double> x = T_hat;
    // Restart from the incumbent with shrinking simplices until progress stalls; a collapsed
    // simplex is the usual failure mode of the method in more than a few dimensions.
    double radius = 0.5 / n;
    for (int restart = 0; restart < 8 && best > 0.0; ++restart) {
        double f = 0.0;
        auto cand = nelder_mead(y, omega_hat, x, f, radius, cfg.simplex_tol, max_evals);
        const bool gained = f < best * (1.0 - 1e-3);
        if (f < best) {
            best = f;
            x = cand;
        }
        if (!gained && restart > 0) break;
        radius = std::max(radius * 0.1, 100.0 * cfg.simplex_tol);
    }
    for (auto& v : x) v = wrap_unit(v);
    return x;
}

GreedyResult greedy_demix(const CVector& y, const GreedyConfig& cfg) {
    const int n = static_cast<int>(y.size());
    require(n >= 2, "greedy_demix: need at least two samples");
    require(cfg.fft_oversample >= 8, "greedy_demix: oversampling must be at least 8");
    const double ynorm = y.norm();
    const double tau = cfg.tau >= 0.0 ? cfg.tau : 1e-6 * ynorm / std::sqrt(static_cast<double>(n));
    const int max_atoms = cfg.max_atoms > 0 ? cfg.max_atoms : n;
    const int max_outer = cfg.max_outer_iters > 0 ? cfg.max_outer_iters : 2 * n;

    GreedyResult res;
    std::vector<double> T;
    std::vector<int> O;
    detail::LineFit fit;
    fit.x = CVector();
    fit.z = CVector();
    fit.residual = y;
    if (ynorm == 0.0) res.converged = true;

    for (int it = 1; it <= max_outer && !res.converged; ++it) {
        if (fit.residual.norm() < 1e-9 * ynorm) {
            res.converged = true;
            break;
        }
        const Atom a = correlation_scan(fit.residual, cfg);
        const int atoms = static_cast<int>(T.size() + O.size()) + 1;
        if (atoms > max_atoms || atoms > n) break;
        if (a.kind == AtomKind::Spike) {
            if (std::find(O.begin(), O.end(), a.index) != O.end()) break;
            O.push_back(a.index);
            std::sort(O.begin(), O.end());
        } else {
            T.push_back(a.freq);
        }

        fit = detail::fit_masked(y, T, O, false);
        // Prune, then optimize the surviving frequencies.
        std::vector<double> T2;
        std::vector<int> O2;
        for (std::size_t j = 0; j < T.size(); ++j)
            if (std::abs(fit.x[static_cast<Eigen::Index>(j)]) >= tau) T2.push_back(T[j]);
        for (std::size_t c = 0; c < O.size(); ++c)
            if (std::abs(fit.z[static_cast<Eigen::Index>(c)]) >= tau) O2.push_back(O[c]);
        if (T2.size() != T.size() || O2.size() != O.size()) {
            T = T2;
            O = O2;
        }
        if (cfg.local_opt && !T.empty()) T = local_optimize(y, T, O, cfg);
        fit = detail::fit_masked(y, T, O, false);

        GreedyTraceEntry e;
        e.iter = it;
        e.residual = fit.residual.norm();
        e.n_sines = static_cast<int>(T.size());
        e.n_spikes = static_cast<int>(O.size());
        e.selected = a;
        res.trace.push_back(e);
        if (e.residual < 1e-9 * ynorm) res.converged = true;
    }

    res.freqs = T;
    res.x = fit.x;
    res.omega = O;
    res.z = fit.z;
    std::vector<SpectralLine> lines;
    for (std::size_t j = 0; j < T.size(); ++j) lines.push_back({wrap_unit(T[j]), fit.x[static_cast<Eigen::Index>(j)]});
    std::sort(lines.begin(), lines.end(), [](const SpectralLine& a, const SpectralLine& b) { return a.freq < b.freq; });
    lines.erase(std::unique(lines.begin(), lines.end(),
                            [](const SpectralLine& a, const SpectralLine& b) { return a.freq == b.freq; }),
                lines.end());
    std::map<int, cplx> spikes;
    for (std::size_t c = 0; c < O.size(); ++c) spikes.emplace(O[c], fit.z[static_cast<Eigen::Index>(c)]);
    res.estimate = {LineSpectrum(std::move(lines)), SpikeVector(n, spikes)};
    return res;
}

} // namespace sinespike
