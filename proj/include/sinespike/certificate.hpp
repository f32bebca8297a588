#pragma once

#include <vector>

#include "sinespike/kernels.hpp"

namespace sinespike {

/// Q(f) = sum_{l=1..n} q_l e^{-i 2 pi l f}, stored in sample indexing (q[0] is q_1).
struct DualPolynomial {
    CVector q;
    double lambda = 0.0;

    int n() const { return static_cast<int>(q.size()); }
    cplx eval(double f, int order = 0) const;
    /// Values on f = j/G, j = 0..G-1.
    std::vector<cplx> eval_grid(int G) const;
};

/// Interpolation system [[D0, D1], [-D1, D2]] [alpha; beta] = rhs in centered coordinates.
struct InterpSystem {
    int n = 0;
    int m = 0;
    std::vector<double> freqs;
    std::vector<int> omega;          // sample indices 1..n, sorted
    CMatrix D0, D1, D2, D;
    CMatrix B_omega;                 // 2k x s
    CVector rhs;
    KernelMask mask;
};

/// Builds D and B_Omega; the right-hand side is filled by set_rhs.
InterpSystem build_system(const KernelSpec& spec, const std::vector<double>& T,
                          const std::vector<int>& omega, int n);

/// rhs = [h'; 0] - lambda B_Omega r, where h' is h expressed for the centered polynomial.
void set_rhs(InterpSystem& sys, const CVector& h, const CVector& r, double lambda);

DualPolynomial construct_certificate(InterpSystem& sys, const CVector& h, const CVector& r,
                                     double lambda, const KernelSpec& spec);

DualPolynomial clean_certificate(const KernelSpec& spec, const std::vector<double>& T,
                                 const CVector& h, int n);

struct CertificateReport {
    double interpolation_err = 0.0;
    double derivative_err = 0.0;
    double offsupport_max = 0.0;
    double q_on_omega_err = 0.0;
    double q_off_omega_max = 0.0;
    bool concave_at_support = false;
    bool valid = false;
};

struct VerifyOptions {
    int grid_size = 0;          // 0 selects 10^4 n
    double guard_radius = -1.0; // negative selects 10^-3 / n
    double tol_interp = 1e-8;
    double margin = 1e-6;
};

/// h and r are the sign patterns the certificate was asked to interpolate.
CertificateReport verify_certificate(const DualPolynomial& poly, const std::vector<double>& T,
                                     const std::vector<int>& omega, const CVector& h, const CVector& r,
                                     const VerifyOptions& opt = {});

double smallest_singular_value(const CMatrix& A);

} // namespace sinespike
