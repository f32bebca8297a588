#pragma once

// Slow, direct reference implementations. They deliberately avoid the library's
// helpers (FFT paths, recurrences, LAPACK) so that agreement means something.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
constexpr double pi = 3.14159265358979323846;

inline cplx expi(double phase) { return std::polar(1.0, phase); }

// y_l = sum_j x_j exp(i 2 pi f_j l), l = 1..n
inline CVector forward(const std::vector<double>& f, const std::vector<cplx>& x, int n) {
    CVector y = CVector::Zero(n);
    for (int l = 1; l <= n; ++l)
        for (std::size_t j = 0; j < f.size(); ++j) y[l - 1] += x[j] * expi(2.0 * pi * f[j] * l);
    return y;
}

inline double min_separation(const std::vector<double>& f) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = a + 1; b < f.size(); ++b) {
            const double d = std::fabs(f[a] - f[b]);
            best = std::min(best, std::min(d, 1.0 - d));
        }
    return best;
}

// M_{jk} = u_{k-j+1} above the diagonal, conjugated below.
inline CMatrix toeplitz(const CVector& u) {
    const int n = static_cast<int>(u.size());
    CMatrix M(n, n);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) M(j - 1, k - 1) = k >= j ? u[k - j] : std::conj(u[j - k]);
    return M;
}

// Sum of the (j-1)-th superdiagonal.
inline CVector toeplitz_adjoint(const CMatrix& M) {
    const int n = static_cast<int>(M.rows());
    CVector out = CVector::Zero(n);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n - j + 1; ++i) out[j - 1] += M(i - 1, i + j - 2);
    return out;
}

inline CMatrix psd_project(const CMatrix& H) {
    const CMatrix S = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(S);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline CVector prox(const CVector& v, double tau) {
    CVector out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double a = std::abs(v[j]);
        out[j] = a > tau ? (v[j] / a) * (a - tau) : cplx(0.0, 0.0);
    }
    return out;
}

struct AdmmVars {
    double t = 0.0;
    CVector u, g, z;
    CMatrix Psi, Ups;
};

// One sweep of the closed-form updates: t, u, g, z, Psi, Upsilon, each using the newest values.
inline void admm_iteration(AdmmVars& v, const CVector& y, double rho, double xi, double lambda_p) {
    const int n = static_cast<int>(y.size());
    v.t = v.Psi(n, n).real() + (v.Ups(n, n).real() - xi / 2.0) / rho;

    const CVector Tstar = toeplitz_adjoint(v.Psi.topLeftCorner(n, n) + v.Ups.topLeftCorner(n, n) / rho);
    for (int j = 1; j <= n; ++j) v.u[j - 1] = Tstar[j - 1] / static_cast<double>(n - j + 1);
    v.u[0] -= xi / (2.0 * rho);
    v.u[0] = v.u[0].real();

    const CVector psi = v.Psi.block(0, n, n, 1);
    const CVector ups = v.Ups.block(0, n, n, 1);
    v.g = (y - v.z + 2.0 * rho * psi + 2.0 * ups) / (2.0 * rho + 1.0);

    v.z = prox(y - v.g, lambda_p);

    CMatrix X(n + 1, n + 1);
    X.topLeftCorner(n, n) = toeplitz(v.u);
    X.block(0, n, n, 1) = v.g;
    X.block(n, 0, 1, n) = v.g.adjoint();
    X(n, n) = v.t;
    v.Psi = psd_project(X - v.Ups / rho);
    v.Ups = v.Ups + rho * (v.Psi - X);
}

// Coefficients of the triple-rectangle kernel by explicit discrete convolution, index -m..m.
inline std::vector<double> kernel_coefficients(int m) {
    const int w1 = static_cast<int>(std::lround(0.247 * m));
    const int w2 = static_cast<int>(std::lround(0.339 * m));
    const int w3 = m - w1 - w2;
    std::vector<double> c(2 * m + 1, 0.0);
    for (int a = -w1; a <= w1; ++a)
        for (int b = -w2; b <= w2; ++b)
            for (int d = -w3; d <= w3; ++d)
                c[a + b + d + m] += 1.0 / ((2.0 * w1 + 1) * (2.0 * w2 + 1) * (2.0 * w3 + 1));
    return c;
}

// sum_l (i 2 pi l)^order c_l e^{i 2 pi l f}, skipping the flagged indices.
inline cplx kernel_sum(const std::vector<double>& c, double f, int order, const std::vector<bool>* skip = nullptr) {
    const int m = (static_cast<int>(c.size()) - 1) / 2;
    cplx s = 0.0;
    for (int l = -m; l <= m; ++l) {
        if (skip && (*skip)[l + m]) continue;
        s += std::pow(cplx(0.0, 2.0 * pi * l), order) * c[l + m] * expi(2.0 * pi * l * f);
    }
    return s;
}

inline double dirichlet(int mt, double f) {
    cplx s = 0.0;
    for (int l = -mt; l <= mt; ++l) s += expi(2.0 * pi * l * f);
    return s.real() / (2.0 * mt + 1.0);
}

// Certificate built from kernel translates in the centered frame. Evaluates
// P(f) = sum_j alpha_j K(f - f_j) + kappa beta_j K'(f - f_j) + R(f), where P(f) = Q(f) e^{i 2 pi (m+1) f}.
struct CertificateOracle {
    int n = 0, m = 0;
    double kappa = 0.0, lambda = 0.0;
    std::vector<double> c, T;
    std::vector<bool> skip;
    std::vector<int> omega;
    CVector r, alpha, beta;

    CertificateOracle(int n_, const std::vector<double>& T_, const std::vector<int>& omega_, const CVector& h,
                      const CVector& r_, double lambda_)
        : n(n_), m((n_ % 2 == 1) ? (n_ - 1) / 2 : n_ / 2 - 1), lambda(lambda_), T(T_), omega(omega_), r(r_) {
        c = kernel_coefficients(m);
        double d2 = 0.0;
        for (int l = -m; l <= m; ++l) d2 += std::pow(2.0 * pi * l, 2) * c[l + m];
        kappa = 1.0 / std::sqrt(d2);
        skip.assign(2 * m + 1, false);
        for (int l : omega) {
            const int j = (m + 1) - l;
            if (j >= -m && j <= m) skip[j + m] = true;
        }
        const int k = static_cast<int>(T.size());
        CMatrix A(2 * k, 2 * k);
        CVector b(2 * k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const double d = T[i] - T[j];
                A(i, j) = kernel_sum(c, d, 0, &skip);
                A(i, k + j) = kappa * kernel_sum(c, d, 1, &skip);
                A(k + i, j) = kappa * kernel_sum(c, d, 1, &skip);
                A(k + i, k + j) = kappa * kappa * kernel_sum(c, d, 2, &skip);
            }
            b[i] = h[i] * expi(2.0 * pi * (m + 1) * T[i]) - R(T[i], 0);
            b[k + i] = -kappa * R(T[i], 1);
        }
        const CVector sol = A.fullPivLu().solve(b);
        alpha = sol.head(k);
        beta = sol.tail(k);
    }

    cplx R(double f, int order) const {
        cplx s = 0.0;
        for (std::size_t a = 0; a < omega.size(); ++a) {
            const int j = (m + 1) - omega[a];
            s += lambda * r[static_cast<Eigen::Index>(a)] * std::pow(cplx(0.0, 2.0 * pi * j), order) *
                 expi(2.0 * pi * j * f);
        }
        return s;
    }

    cplx P(double f) const {
        cplx s = R(f, 0);
        for (std::size_t j = 0; j < T.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            s += alpha[jj] * kernel_sum(c, f - T[j], 0, &skip) + kappa * beta[jj] * kernel_sum(c, f - T[j], 1, &skip);
        }
        return s;
    }

    // Q(f) in sample indexing.
    cplx Q(double f) const { return P(f) * expi(-2.0 * pi * (m + 1) * f); }
};

// Least squares through the normal equations.
inline CVector normal_equations(const CMatrix& A, const CVector& y) {
    const CMatrix G = A.adjoint() * A;
    return G.ldlt().solve(A.adjoint() * y);
}

inline double rel_err(const CVector& a, const CVector& b) {
    const double d = b.norm();
    return d > 0 ? (a - b).norm() / d : a.norm();
}

inline CVector random_cvector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(N(rng), N(rng));
    return v;
}

inline CMatrix random_hermitian(int n, std::mt19937_64& rng) {
    CMatrix A(n, n);
    std::normal_distribution<double> N;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = cplx(N(rng), N(rng));
    return 0.5 * (A + A.adjoint());
}

} // namespace oracle
