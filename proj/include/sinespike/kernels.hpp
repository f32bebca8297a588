#pragma once

#include <array>
#include <span>
#include <vector>

#include "sinespike/types.hpp"

namespace sinespike {

/// Triple-Dirichlet interpolation kernel with coefficients c_{-m..m}.
struct KernelSpec {
    int m = 0;
    std::array<int, 3> widths{};
    std::vector<double> c; // c[l + m] holds c_l
    double kappa = 0.0;

    double coeff(int l) const { return (l < -m || l > m) ? 0.0 : c[static_cast<std::size_t>(l + m)]; }
    double max_coeff() const;
};

/// Set of centered coefficient indices in -m..m whose kernel coefficients are zeroed.
class KernelMask {
public:
    KernelMask() = default;
    KernelMask(int m, std::span<const int> centered);
    bool empty() const { return count_ == 0; }
    bool masked(int l) const;
    int m() const { return m_; }

private:
    int m_ = 0;
    int count_ = 0;
    std::vector<char> bits_;
};

/// Order-th derivative of the Dirichlet kernel D_mt(f) = sum_{|l|<=mt} e^{i2pi l f} / (2mt+1).
double dirichlet_eval(int m_tilde, double f, int order);

KernelSpec build_kernel(int m);

/// sum_{l not masked} (i 2 pi l)^order c_l e^{i 2 pi l f}
cplx kernel_eval(const KernelSpec& spec, double f, int order, const KernelMask* mask = nullptr);

/// Orders 0..3 in one pass.
std::array<cplx, 4> kernel_eval_all(const KernelSpec& spec, double f, const KernelMask* mask = nullptr);

/// Kernel derivative of given order sampled at f = j/grid_size, j = 0..grid_size-1, via FFT.
std::vector<cplx> kernel_grid(const KernelSpec& spec, int grid_size, int order,
                              const KernelMask* mask = nullptr);

/// Half-length used for n samples: (n-1)/2 for odd n, n/2 - 1 for even n.
int half_length_for(int n);

} // namespace sinespike
