#include "linefit.hpp"

#include <algorithm>
#include <cmath>

namespace sinespike::detail {

CMatrix atom_matrix(const std::vector<double>& freqs, int n, const std::vector<int>& rows) {
    (void)n;
    CMatrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(freqs.size()));
    for (std::size_t j = 0; j < freqs.size(); ++j)
        for (std::size_t r = 0; r < rows.size(); ++r)
            A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = cis2pi(freqs[j] * (rows[r] + 1));
    return A;
}

std::vector<int> complement_rows(int n, const std::vector<int>& omega) {
    std::vector<char> out(static_cast<std::size_t>(n), 0);
    for (int i : omega) {
        require(i >= 1 && i <= n, "outlier index outside 1..n");
        out[static_cast<std::size_t>(i - 1)] = 1;
    }
    std::vector<int> rows;
    for (int r = 0; r < n; ++r)
        if (!out[static_cast<std::size_t>(r)]) rows.push_back(r);
    return rows;
}

namespace {

CVector gather(const CVector& y, const std::vector<int>& rows) {
    CVector v(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) v[static_cast<Eigen::Index>(r)] = y[rows[r]];
    return v;
}

double r_condition(const Eigen::ColPivHouseholderQR<CMatrix>& qr) {
    const auto d = qr.matrixQR().diagonal().cwiseAbs();
    if (d.size() == 0) return 1.0;
    const double lo = d.minCoeff();
    return lo > 0.0 ? d.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

} // namespace

LineFit fit_masked(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega, bool check) {
    const int n = static_cast<int>(y.size());
    const auto rows = complement_rows(n, omega);
    require(freqs.size() <= rows.size(), "amplitude fit needs at least as many clean rows as frequencies");
    LineFit fit;
    fit.residual = CVector::Zero(n);
    const CVector yr = gather(y, rows);
    CVector model = CVector::Zero(n);
    if (!freqs.empty()) {
        const CMatrix A = atom_matrix(freqs, n, rows);
        Eigen::ColPivHouseholderQR<CMatrix> qr(A);
        fit.rank = static_cast<int>(qr.rank());
        fit.cond = r_condition(qr);
        if (check && fit.rank < static_cast<int>(freqs.size()))
            fail(ErrorCode::Singular, "spectral dictionary is rank deficient (condition estimate " +
                                          std::to_string(fit.cond) + ")");
        fit.x = qr.solve(yr);
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) all[static_cast<std::size_t>(r)] = r;
        model = atom_matrix(freqs, n, all) * fit.x;
    } else {
        fit.x = CVector();
    }
    fit.z = CVector(static_cast<Eigen::Index>(omega.size()));
    for (std::size_t c = 0; c < omega.size(); ++c)
        fit.z[static_cast<Eigen::Index>(c)] = y[omega[c] - 1] - model[omega[c] - 1];
    for (int r : rows) fit.residual[r] = y[r] - model[r];
    return fit;
}

LineFit fit_joint(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega) {
    const int n = static_cast<int>(y.size());
    const auto k = static_cast<Eigen::Index>(freqs.size());
    const auto s = static_cast<Eigen::Index>(omega.size());
    require(k + s <= n, "joint amplitude fit requires k + s <= n");
    LineFit fit;
    if (k + s == 0) {
        fit.x = CVector();
        fit.z = CVector();
        fit.residual = y;
        return fit;
    }
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) all[static_cast<std::size_t>(r)] = r;
    CMatrix A(n, k + s);
    A.leftCols(k) = atom_matrix(freqs, n, all);
    A.rightCols(s).setZero();
    for (Eigen::Index c = 0; c < s; ++c) {
        const int i = omega[static_cast<std::size_t>(c)];
        require(i >= 1 && i <= n, "outlier index outside 1..n");
        A(i - 1, k + c) = 1.0;
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(A);
    fit.rank = static_cast<int>(qr.rank());
    fit.cond = r_condition(qr);
    if (fit.rank < k + s)
        fail(ErrorCode::Singular, "combined dictionary is rank deficient (condition estimate " +
                                      std::to_string(fit.cond) + ")");
    const CVector sol = qr.solve(y);
    fit.x = sol.head(k);
    fit.z = sol.tail(s);
    fit.residual = y - A * sol;
    return fit;
}

double ls_cost(const CVector& y, const std::vector<double>& freqs, const std::vector<int>& omega) {
    const int n = static_cast<int>(y.size());
    const auto rows = complement_rows(n, omega);
    const CVector yr = gather(y, rows);
    if (freqs.empty()) return yr.norm();
    const CMatrix A = atom_matrix(freqs, n, rows);
    Eigen::HouseholderQR<CMatrix> qr(A);
    const CVector x = qr.solve(yr);
    return (yr - A * x).norm();
}

double polish_frequencies(const CVector& y, std::vector<double>& freqs, const std::vector<int>& omega,
                          double max_move, int max_iters) {
    const int n = static_cast<int>(y.size());
    const auto rows = complement_rows(n, omega);
    const CVector yr = gather(y, rows);
    const auto k = static_cast<Eigen::Index>(freqs.size());
    if (k == 0) return yr.norm();
    const std::vector<double> start = freqs;
    double cost = ls_cost(y, freqs, omega);
    for (int it = 0; it < max_iters && cost > 0.0; ++it) {
        const CMatrix A = atom_matrix(freqs, n, rows);
        Eigen::HouseholderQR<CMatrix> qr(A);
        const CVector x = qr.solve(yr);
        const CVector r = yr - A * x;
        const CMatrix Q = qr.householderQ() * CMatrix::Identity(A.rows(), k);
        // Kaufman's variable-projection Jacobian of the residual with respect to each frequency.
        CMatrix J(A.rows(), k);
        for (Eigen::Index j = 0; j < k; ++j) {
            CVector dcol(A.rows());
            for (std::size_t rr = 0; rr < rows.size(); ++rr)
                dcol[static_cast<Eigen::Index>(rr)] = cplx(0.0, kTwoPi * (rows[rr] + 1)) * A(static_cast<Eigen::Index>(rr), j) * x[j];
            J.col(j) = -(dcol - Q * (Q.adjoint() * dcol));
        }
        Eigen::MatrixXd Jr(2 * J.rows(), k);
        Jr.topRows(J.rows()) = J.real();
        Jr.bottomRows(J.rows()) = J.imag();
        RVector rr(2 * r.size());
        rr.head(r.size()) = r.real();
        rr.tail(r.size()) = r.imag();
        const RVector step = -Jr.colPivHouseholderQr().solve(rr);
        if (!step.allFinite()) break;
        bool improved = false;
        double t = 1.0;
        for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
            std::vector<double> trial = freqs;
            for (Eigen::Index j = 0; j < k; ++j) {
                const double d = std::clamp(trial[j] + t * step[j] - start[j], -max_move, max_move);
                trial[j] = start[j] + d;
            }
            const double c = ls_cost(y, trial, omega);
            if (c < cost) {
                const double gain = cost - c;
                freqs = trial;
                cost = c;
                improved = gain > 1e-15 * yr.norm();
                break;
            }
        }
        if (!improved) break;
    }
    for (auto& f : freqs) f = wrap_unit(f);
    return cost;
}

} // namespace sinespike::detail
