#pragma once

#include <limits>
#include <vector>

#include "sinespike/types.hpp"

namespace sinespike {

/// Hermitian Toeplitz matrix with first row u^T. Rejects a first entry with nonzero imaginary part.
CMatrix toeplitz_from_vector(const CVector& u);

/// T*(M)_j = sum_i M_{i, i+j-1}: sums along the main diagonal and the superdiagonals.
CVector toeplitz_adjoint(const CMatrix& M);

CVector soft_threshold(const CVector& v, double tau);

/// Frobenius-nearest PSD matrix; the input is symmetrized first.
CMatrix psd_project(const CMatrix& H);

struct AdmmState {
    double t = 0.0;
    CVector u, g, z;
    CMatrix Psi, Upsilon;

    static AdmmState zeros(int n);
};

/// Parameters of the scaled problem: objective xi/2 (tr T(u) + t) + lambda'|z|_1 + 1/2|y - g - z|^2.
struct AdmmStepParams {
    double rho = 1.0;
    double xi = 0.0;
    double lambda_p = 0.0;
};

struct StepResiduals {
    double primal = 0.0;
    double dual = 0.0;
    double x_norm = 0.0;
    double psi_norm = 0.0;
    double ups_norm = 0.0;
};

/// One sweep in the order t, u, g, z, Psi, Upsilon, each update using the newest values.
StepResiduals admm_step(AdmmState& st, const CVector& y, const AdmmStepParams& p);

enum class EqualityStrategy { Bregman, Continuation };

struct AdmmConfig {
    double rho = 2.0;    // penalty for the unscaled objective; the scaled problem uses rho / gamma
    double lambda = 0.0; // 0 selects 1/sqrt(n)
    double gamma = std::numeric_limits<double>::infinity(); // infinity selects equality-constrained demixing
    int max_iters = 100000;
    double primal_tol = 1e-7;
    double dual_tol = 1e-7;
    bool adaptive_rho = true;
    double equality_tol = 1e-9; // relative to |y|_2
    EqualityStrategy equality = EqualityStrategy::Bregman;
    double equality_gamma = 10.0; // inner gamma on unit-RMS data for the Bregman loop
    double gamma0 = 10.0;         // first stage of the continuation schedule
    int max_outer = 60;
    bool record_trace = true;

    bool equality_mode() const { return !(gamma < std::numeric_limits<double>::infinity()); }
};

struct DualFeasibility {
    double grid_max = 0.0;
    double eta_inf = 0.0;
    bool ok = false;
};

/// Evaluates sum_l eta_l e^{-i 2 pi l f} on a grid of grid_size points (0 selects 64 n).
DualFeasibility dual_feasibility_check(const CVector& eta, double lambda, int grid_size = 0, double tol = 1e-4);

struct SolveReport {
    CVector g_hat, z_hat, eta;
    int iterations = 0;
    int outer_iterations = 0;
    std::vector<double> primal_residual_trace, dual_residual_trace, objective_trace;
    DualFeasibility dual_feasibility;
    double lambda = 0.0;
    double gamma = 0.0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0; // relative
    double equality_residual = 0.0; // |y - g - z| / |y|
    double final_rho = 0.0;
    bool converged = false;
};

SolveReport admm_solve(const CVector& y, const AdmmConfig& cfg);

} // namespace sinespike
