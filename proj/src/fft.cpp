#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace sinespike::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

std::vector<cplx> dft(const std::vector<cplx>& in, int G, int sign) {
    require(G >= 1, "dft: grid size must be positive");
    std::vector<cplx> buf(static_cast<std::size_t>(G), cplx(0.0, 0.0));
    for (std::size_t t = 0; t < in.size(); ++t) buf[t % static_cast<std::size_t>(G)] += in[t];
    std::vector<cplx> out(buf.size());
    auto* ib = reinterpret_cast<fftw_complex*>(buf.data());
    auto* ob = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        // Only plan creation is not thread-safe in FFTW; execution is.
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(G, ib, ob, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<cplx> eval_dual_grid(const CVector& q, int G) {
    std::vector<cplx> in(static_cast<std::size_t>(q.size()) + 1, cplx(0.0, 0.0));
    for (Eigen::Index l = 0; l < q.size(); ++l) in[static_cast<std::size_t>(l) + 1] = q[l];
    return dft(in, G, -1);
}

cplx eval_dual(const CVector& q, double f, int order) {
    cplx acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        const double l = static_cast<double>(i + 1);
        cplx term = q[i] * cis2pi(-l * f);
        for (int r = 0; r < order; ++r) term *= cplx(0.0, -kTwoPi * l);
        acc += term;
    }
    return acc;
}

} // namespace sinespike::detail
