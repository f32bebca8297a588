#pragma once

#include <vector>

#include "sinespike/types.hpp"

namespace sinespike::detail {

// Columns e^{i 2 pi f_j l}, l = 1..n, restricted to the listed rows (0-based).
CMatrix atom_matrix(const std::vector<double>& freqs, int n, const std::vector<int>& rows);

// 0-based rows of 1..n outside the (1-based) outlier support.
std::vector<int> complement_rows(int n, const std::vector<int>& omega);

struct LineFit {
    CVector x;        // spectral amplitudes
    CVector z;        // outlier amplitudes, aligned with omega
    CVector residual; // length n; zero on omega
    double cond = 1.0;
    int rank = 0;
};

// Spectral amplitudes from the rows outside omega; outliers absorb the residual on omega.
// With check set, a rank-deficient dictionary raises ErrorCode::Singular.
LineFit fit_masked(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega,
                   bool check = true);

// Least squares over the full dictionary [F_T | I_Omega].
LineFit fit_joint(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega);

// Residual norm of the best fit with frequencies freqs; no rank checks.
double ls_cost(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega);

// Variable-projection Gauss-Newton on the frequencies; each frequency moves at most max_move.
// Returns the final residual norm.
double polish_frequencies(const CVector& y, std::vector<double>& freqs, const std::vector<int>& omega,
                          double max_move, int max_iters = 50);

} // namespace sinespike::detail
