#include "sinespike/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace sinespike {

double KernelSpec::max_coeff() const { return c.empty() ? 0.0 : *std::max_element(c.begin(), c.end()); }

KernelMask::KernelMask(int m, std::span<const int> centered) : m_(m), bits_(static_cast<std::size_t>(2 * m + 1), 0) {
    for (int l : centered) {
        require(l >= -m && l <= m, "kernel mask index outside -m..m");
        char& b = bits_[static_cast<std::size_t>(l + m)];
        if (!b) {
            b = 1;
            ++count_;
        }
    }
}

bool KernelMask::masked(int l) const {
    if (l < -m_ || l > m_ || bits_.empty()) return false;
    return bits_[static_cast<std::size_t>(l + m_)] != 0;
}

int half_length_for(int n) {
    require(n >= 2, "need at least two samples");
    return (n % 2 == 1) ? (n - 1) / 2 : n / 2 - 1;
}

double dirichlet_eval(int m_tilde, double f, int order) {
    require(m_tilde >= 0, "dirichlet_eval: negative half-width");
    require(order >= 0 && order <= 3, "dirichlet_eval: order must be 0..3");
    const double N = 2.0 * m_tilde + 1.0;
    const double fw = wrap_unit(f);
    if (fw == 0.0) {
        switch (order) {
        case 0: return 1.0;
        case 2: return -4.0 * kPi * kPi * m_tilde * (m_tilde + 1.0) / 3.0;
        default: return 0.0;
        }
    }
    if (order == 0) return std::sin(N * kPi * f) / (N * std::sin(kPi * f));
    // D is real and even, so only one trigonometric term per pair survives.
    double acc = 0.0;
    for (int l = 1; l <= m_tilde; ++l) {
        const double w = kTwoPi * l;
        const double a = w * f;
        switch (order) {
        case 1: acc += -2.0 * w * std::sin(a); break;
        case 2: acc += -2.0 * w * w * std::cos(a); break;
        case 3: acc += 2.0 * w * w * w * std::sin(a); break;
        }
    }
    return acc / N;
}

KernelSpec build_kernel(int m) {
    require(m >= 4, "build_kernel: m must be at least 4");
    KernelSpec k;
    k.m = m;
    const int m1 = static_cast<int>(std::lround(0.247 * m));
    const int m2 = static_cast<int>(std::lround(0.339 * m));
    const int m3 = m - m1 - m2;
    if (m1 < 1 || m2 < 1 || m3 < 1) fail(ErrorCode::InvalidArgument, "build_kernel: m too small for three positive widths");
    k.widths = {m1, m2, m3};

    std::vector<double> acc{1.0};
    for (int w : k.widths) {
        const int taps = 2 * w + 1;
        std::vector<double> next(acc.size() + static_cast<std::size_t>(taps) - 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (int t = 0; t < taps; ++t) next[i + static_cast<std::size_t>(t)] += acc[i] / taps;
        acc.swap(next);
    }
    k.c = std::move(acc);
    // Enforce exact symmetry against rounding in the convolution.
    for (int l = 1; l <= m; ++l) {
        const double v = 0.5 * (k.c[static_cast<std::size_t>(m + l)] + k.c[static_cast<std::size_t>(m - l)]);
        k.c[static_cast<std::size_t>(m + l)] = v;
        k.c[static_cast<std::size_t>(m - l)] = v;
    }
    double curv = 0.0;
    for (int l = -m; l <= m; ++l) curv += kTwoPi * l * kTwoPi * l * k.coeff(l);
    k.kappa = 1.0 / std::sqrt(curv);
    return k;
}

std::array<cplx, 4> kernel_eval_all(const KernelSpec& spec, double f, const KernelMask* mask) {
    const int m = spec.m;
    const bool use_mask = mask != nullptr && !mask->empty();
    // Moments S_r = sum_l c_l l^r e^{i2pi l f} in real arithmetic; std::complex products
    // go through the slow NaN-aware path and dominate otherwise.
    double s0r = 0.0, s0i = 0.0, s1r = 0.0, s1i = 0.0, s2r = 0.0, s2i = 0.0, s3r = 0.0, s3i = 0.0;
    const double sr = std::cos(kTwoPi * f), si = std::sin(kTwoPi * f);
    double rr = 0.0, ri = 0.0;
    for (int l = -m; l <= m; ++l) {
        // Re-anchor the rotation recurrence periodically to bound drift.
        if ((l + m) % 32 == 0) {
            const double a = kTwoPi * wrap_unit(static_cast<double>(l) * f);
            rr = std::cos(a);
            ri = std::sin(a);
        } else {
            const double t = rr * sr - ri * si;
            ri = rr * si + ri * sr;
            rr = t;
        }
        if (use_mask && mask->masked(l)) continue;
        const double c = spec.c[static_cast<std::size_t>(l + m)];
        const double L = static_cast<double>(l);
        const double br = c * rr, bi = c * ri;
        s0r += br;
        s0i += bi;
        s1r += L * br;
        s1i += L * bi;
        s2r += L * L * br;
        s2i += L * L * bi;
        s3r += L * L * L * br;
        s3i += L * L * L * bi;
    }
    const double w = kTwoPi;
    return {cplx(s0r, s0i), cplx(-w * s1i, w * s1r), cplx(-w * w * s2r, -w * w * s2i),
            cplx(w * w * w * s3i, -w * w * w * s3r)};
}

cplx kernel_eval(const KernelSpec& spec, double f, int order, const KernelMask* mask) {
    require(order >= 0 && order <= 3, "kernel_eval: order must be 0..3");
    return kernel_eval_all(spec, f, mask)[static_cast<std::size_t>(order)];
}

std::vector<cplx> kernel_grid(const KernelSpec& spec, int grid_size, int order, const KernelMask* mask) {
    require(grid_size >= 2 * spec.m + 1, "kernel_grid: grid must hold all coefficients");
    require(order >= 0 && order <= 3, "kernel_grid: order must be 0..3");
    std::vector<cplx> in(static_cast<std::size_t>(grid_size), cplx(0.0, 0.0));
    for (int l = -spec.m; l <= spec.m; ++l) {
        if (mask != nullptr && mask->masked(l)) continue;
        cplx v = spec.coeff(l);
        for (int r = 0; r < order; ++r) v *= cplx(0.0, kTwoPi * l);
        in[static_cast<std::size_t>((l + grid_size) % grid_size)] += v;
    }
    return detail::dft(in, grid_size, +1);
}

} // namespace sinespike
