#include "sinespike/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "sinespike/model.hpp"

namespace sinespike {

cplx DualPolynomial::eval(double f, int order) const { return detail::eval_dual(q, f, order); }

std::vector<cplx> DualPolynomial::eval_grid(int G) const { return detail::eval_dual_grid(q, G); }

double smallest_singular_value(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::BDCSVD<CMatrix> svd(A);
    return svd.singularValues().minCoeff();
}

namespace {

// Sample index l in 1..n sits at centered index l - (m+1).
int centered(int sample, int m) { return sample - (m + 1); }

} // namespace

InterpSystem build_system(const KernelSpec& spec, const std::vector<double>& T, const std::vector<int>& omega,
                          int n) {
    require(!T.empty(), "build_system: support T must be nonempty");
    const int m = half_length_for(n);
    require(spec.m == m, "build_system: kernel half-length does not match n");
    require(T.size() + omega.size() <= static_cast<std::size_t>(n), "build_system: requires k + s <= n");

    InterpSystem sys;
    sys.n = n;
    sys.m = m;
    sys.freqs = T;
    sys.omega = omega;
    std::sort(sys.omega.begin(), sys.omega.end());
    require(std::adjacent_find(sys.omega.begin(), sys.omega.end()) == sys.omega.end(),
            "build_system: duplicate outlier index");
    std::vector<int> masked;
    for (int i : sys.omega) {
        require(i >= 1 && i <= n, "build_system: outlier index outside 1..n");
        // The coefficient of e^{-i2pi l f} in the kernel expansion comes from kernel index -l.
        const int l = -centered(i, m);
        if (l >= -m && l <= m) masked.push_back(l);
    }
    sys.mask = KernelMask(m, masked);

    const auto k = static_cast<Eigen::Index>(T.size());
    sys.D0.resize(k, k);
    sys.D1.resize(k, k);
    sys.D2.resize(k, k);
    const double kap = spec.kappa;
    // Real coefficients give K^(r)(-f) = (-1)^r conj(K^(r)(f)), so only the upper triangle is evaluated.
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index l = j; l < k; ++l) {
            const auto v = kernel_eval_all(spec, T[j] - T[l], &sys.mask);
            sys.D0(j, l) = v[0];
            sys.D1(j, l) = kap * v[1];
            sys.D2(j, l) = -kap * kap * v[2];
            sys.D0(l, j) = std::conj(sys.D0(j, l));
            sys.D1(l, j) = -std::conj(sys.D1(j, l));
            sys.D2(l, j) = std::conj(sys.D2(j, l));
        }
    sys.D.resize(2 * k, 2 * k);
    sys.D << sys.D0, sys.D1, -sys.D1, sys.D2;

    const auto s = static_cast<Eigen::Index>(sys.omega.size());
    sys.B_omega.resize(2 * k, s);
    for (Eigen::Index c = 0; c < s; ++c) {
        const int l = centered(sys.omega[static_cast<std::size_t>(c)], m);
        for (Eigen::Index j = 0; j < k; ++j) {
            const cplx e = cis2pi(-static_cast<double>(l) * T[j]);
            sys.B_omega(j, c) = e;
            sys.B_omega(k + j, c) = cplx(0.0, kTwoPi * l * kap) * e;
        }
    }
    sys.rhs = CVector::Zero(2 * k);
    return sys;
}

void set_rhs(InterpSystem& sys, const CVector& h, const CVector& r, double lambda) {
    const auto k = static_cast<Eigen::Index>(sys.freqs.size());
    require(h.size() == k, "set_rhs: h must have one entry per frequency");
    require(r.size() == static_cast<Eigen::Index>(sys.omega.size()), "set_rhs: r must have one entry per outlier");
    sys.rhs = CVector::Zero(2 * k);
    for (Eigen::Index j = 0; j < k; ++j) sys.rhs[j] = h[j] * cis2pi((sys.m + 1) * sys.freqs[j]);
    if (r.size() > 0) sys.rhs -= lambda * (sys.B_omega * r);
}

DualPolynomial construct_certificate(InterpSystem& sys, const CVector& h, const CVector& r, double lambda,
                                     const KernelSpec& spec) {
    set_rhs(sys, h, r, lambda);
    const double smin = smallest_singular_value(sys.D);
    if (!(smin > 1e-10))
        fail(ErrorCode::Singular, "interpolation system is singular (smallest singular value " +
                                      std::to_string(smin) + ")");
    const CVector ab = sys.D.partialPivLu().solve(sys.rhs);
    const auto k = static_cast<Eigen::Index>(sys.freqs.size());
    const int m = sys.m;
    const int n = sys.n;

    DualPolynomial poly;
    poly.lambda = lambda;
    poly.q = CVector::Zero(n);
    for (int i = 1; i <= n; ++i) {
        const int l = centered(i, m);
        if (l < -m || l > m || sys.mask.masked(-l)) continue;
        cplx acc(0.0, 0.0);
        for (Eigen::Index j = 0; j < k; ++j)
            acc += cis2pi(static_cast<double>(l) * sys.freqs[j]) *
                   (ab[j] + cplx(0.0, -kTwoPi * l * spec.kappa) * ab[k + j]);
        poly.q[i - 1] = spec.coeff(-l) * acc;
    }
    for (std::size_t c = 0; c < sys.omega.size(); ++c)
        poly.q[sys.omega[c] - 1] = lambda * r[static_cast<Eigen::Index>(c)];
    return poly;
}

DualPolynomial clean_certificate(const KernelSpec& spec, const std::vector<double>& T, const CVector& h, int n) {
    InterpSystem sys = build_system(spec, T, {}, n);
    return construct_certificate(sys, h, CVector(), 0.0, spec);
}

CertificateReport verify_certificate(const DualPolynomial& poly, const std::vector<double>& T,
                                     const std::vector<int>& omega, const CVector& h, const CVector& r,
                                     const VerifyOptions& opt) {
    const int n = poly.n();
    require(h.size() == static_cast<Eigen::Index>(T.size()), "verify_certificate: h size mismatch");
    require(r.size() == static_cast<Eigen::Index>(omega.size()), "verify_certificate: r size mismatch");
    const int G = opt.grid_size > 0 ? opt.grid_size : 10000 * n;
    require(G >= 4 * n, "verify_certificate: grid must have at least 4n points");
    const double guard = opt.guard_radius >= 0.0 ? opt.guard_radius : 1e-3 / n;
    const double near = 0.1 / n;
    const int m = half_length_for(n);
    const double kappa = m >= 4 ? build_kernel(m).kappa : 1.0 / (kTwoPi * m);

    CertificateReport rep;
    bool concave = true;
    for (std::size_t j = 0; j < T.size(); ++j) {
        const cplx Q0 = poly.eval(T[j], 0);
        const cplx Q1 = poly.eval(T[j], 1);
        const cplx Q2 = poly.eval(T[j], 2);
        rep.interpolation_err = std::max(rep.interpolation_err, std::abs(Q0 - h[static_cast<Eigen::Index>(j)]));
        // Derivative of the centered polynomial P(f) = e^{i2pi(m+1)f} Q(f).
        const cplx P1 = cplx(0.0, kTwoPi * (m + 1)) * Q0 + Q1;
        rep.derivative_err = std::max(rep.derivative_err, kappa * std::abs(P1));
        const double curv = 2.0 * std::real(Q2 * std::conj(Q0)) + 2.0 * std::norm(Q1);
        if (!(curv < 0.0)) concave = false;
    }

    // Outside the guard intervals: the far region needs the strict margin; the near
    // region (|f - f_j| < 0.1/n) instead needs |Q|^2 to stay strictly concave, because
    // |Q| approaches 1 quadratically there and no fixed margin separates it from 1.
    const auto Q0 = poly.eval_grid(G);
    DualPolynomial d1 = poly, d2 = poly;
    for (int i = 1; i <= n; ++i) {
        d1.q[i - 1] *= cplx(0.0, -kTwoPi * i);
        d2.q[i - 1] *= -kTwoPi * i * kTwoPi * i;
    }
    const auto Q1 = d1.eval_grid(G);
    const auto Q2 = d2.eval_grid(G);
    std::vector<double> sorted = T;
    std::sort(sorted.begin(), sorted.end());
    double far_max = 0.0;
    for (int g = 0; g < G; ++g) {
        const double f = static_cast<double>(g) / G;
        double dist = 1.0;
        if (!sorted.empty()) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), f);
            const double a = it == sorted.end() ? sorted.front() : *it;
            const double b = it == sorted.begin() ? sorted.back() : *(it - 1);
            dist = std::min(wrap_distance(f, a), wrap_distance(f, b));
        }
        if (dist <= guard) continue;
        const double mag = std::abs(Q0[static_cast<std::size_t>(g)]);
        rep.offsupport_max = std::max(rep.offsupport_max, mag);
        if (dist < near) {
            const auto gi = static_cast<std::size_t>(g);
            const double curv = 2.0 * std::real(Q2[gi] * std::conj(Q0[gi])) + 2.0 * std::norm(Q1[gi]);
            if (!(curv < 0.0)) concave = false;
        } else {
            far_max = std::max(far_max, mag);
        }
    }
    rep.concave_at_support = concave;

    std::vector<char> in_omega(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t c = 0; c < omega.size(); ++c) {
        const int i = omega[c];
        require(i >= 1 && i <= n, "verify_certificate: outlier index outside 1..n");
        in_omega[static_cast<std::size_t>(i)] = 1;
        rep.q_on_omega_err =
            std::max(rep.q_on_omega_err, std::abs(poly.q[i - 1] - poly.lambda * r[static_cast<Eigen::Index>(c)]));
    }
    for (int i = 1; i <= n; ++i)
        if (!in_omega[static_cast<std::size_t>(i)]) rep.q_off_omega_max = std::max(rep.q_off_omega_max, std::abs(poly.q[i - 1]));

    const bool interp_ok = rep.interpolation_err < opt.tol_interp;
    const bool poly_ok = rep.offsupport_max < 1.0 && far_max < 1.0 - opt.margin && concave;
    bool coeff_ok = rep.q_on_omega_err == 0.0;
    if (poly.lambda > 0.0) coeff_ok = coeff_ok && rep.q_off_omega_max < poly.lambda * (1.0 - opt.margin);
    rep.valid = interp_ok && poly_ok && coeff_ok;
    return rep;
}

} // namespace sinespike
