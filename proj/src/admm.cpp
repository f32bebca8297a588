#include "sinespike/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <lapacke.h>

#include "fft.hpp"

namespace sinespike {

CMatrix toeplitz_from_vector(const CVector& u) {
    require(u.size() >= 1, "toeplitz_from_vector: empty vector");
    require(u[0].imag() == 0.0, "toeplitz_from_vector: first entry must be real");
    const Eigen::Index n = u.size();
    CMatrix T(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) T(i, j) = j >= i ? u[j - i] : std::conj(u[i - j]);
    return T;
}

CVector toeplitz_adjoint(const CMatrix& M) {
    require(M.rows() == M.cols(), "toeplitz_adjoint: matrix must be square");
    const Eigen::Index n = M.rows();
    CVector out = CVector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i + j < n; ++i) out[j] += M(i, i + j);
    return out;
}

CVector soft_threshold(const CVector& v, double tau) {
    require(tau > 0.0, "soft_threshold: tau must be positive");
    CVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        out[i] = a <= tau ? cplx(0.0, 0.0) : v[i] * ((a - tau) / a);
    }
    return out;
}

CMatrix psd_project(const CMatrix& H) {
    require(H.rows() == H.cols(), "psd_project: matrix must be square");
    const auto n = static_cast<lapack_int>(H.rows());
    if (n == 0) return H;
    CMatrix V = 0.5 * (H + H.adjoint());
    RVector ev(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           reinterpret_cast<lapack_complex_double*>(V.data()), n, ev.data());
    if (info != 0) fail(ErrorCode::Numerical, "psd_project: eigendecomposition failed (info " + std::to_string(info) + ")");
    Eigen::Index first = 0;
    while (first < n && ev[first] <= 0.0) ++first;
    const Eigen::Index npos = n - first;
    if (npos == 0) return CMatrix::Zero(n, n);
    const CMatrix Vp = V.rightCols(npos);
    CMatrix out = Vp * ev.tail(npos).asDiagonal() * Vp.adjoint();
    return 0.5 * (out + out.adjoint());
}

AdmmState AdmmState::zeros(int n) {
    AdmmState s;
    s.u = CVector::Zero(n);
    s.g = CVector::Zero(n);
    s.z = CVector::Zero(n);
    s.Psi = CMatrix::Zero(n + 1, n + 1);
    s.Upsilon = CMatrix::Zero(n + 1, n + 1);
    return s;
}

namespace {

CMatrix assemble_x(const AdmmState& st) {
    const Eigen::Index n = st.u.size();
    CMatrix X(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) X(i, j) = j >= i ? st.u[j - i] : std::conj(st.u[i - j]);
    X.col(n).head(n) = st.g;
    X.row(n).head(n) = st.g.adjoint();
    X(n, n) = st.t;
    return X;
}

bool finite(const CMatrix& M) { return M.allFinite(); }

} // namespace

StepResiduals admm_step(AdmmState& st, const CVector& y, const AdmmStepParams& p) {
    const Eigen::Index n = y.size();
    const double rho = p.rho;

    st.t = st.Psi(n, n).real() + (st.Upsilon(n, n).real() - p.xi / 2.0) / rho;

    const CMatrix W = st.Psi.topLeftCorner(n, n) + st.Upsilon.topLeftCorner(n, n) / rho;
    st.u = toeplitz_adjoint(W);
    for (Eigen::Index j = 0; j < n; ++j) st.u[j] /= static_cast<double>(n - j);
    st.u[0] = cplx(st.u[0].real() - p.xi / (2.0 * rho), 0.0);

    const CVector psi = st.Psi.col(n).head(n);
    const CVector ups = st.Upsilon.col(n).head(n);
    st.g = (y - st.z + 2.0 * rho * psi + 2.0 * ups) / (2.0 * rho + 1.0);

    st.z = p.lambda_p > 0.0 ? soft_threshold(y - st.g, p.lambda_p) : CVector(y - st.g);

    const CMatrix X = assemble_x(st);
    const CMatrix psi_old = st.Psi;
    st.Psi = psd_project(X - st.Upsilon / rho);
    st.Upsilon += rho * (st.Psi - X);
    st.Upsilon = 0.5 * (st.Upsilon + st.Upsilon.adjoint()).eval();

    if (!finite(st.Psi) || !finite(st.Upsilon) || !st.g.allFinite() || !std::isfinite(st.t))
        fail(ErrorCode::Numerical, "ADMM iterate became non-finite");

    StepResiduals r;
    r.primal = (st.Psi - X).norm();
    r.dual = rho * (st.Psi - psi_old).norm();
    r.x_norm = X.norm();
    r.psi_norm = st.Psi.norm();
    r.ups_norm = st.Upsilon.norm();
    return r;
}

DualFeasibility dual_feasibility_check(const CVector& eta, double lambda, int grid_size, double tol) {
    const int n = static_cast<int>(eta.size());
    const int G = grid_size > 0 ? grid_size : 64 * std::max(n, 1);
    require(G >= 16 * n, "dual_feasibility_check: grid must have at least 16n points");
    DualFeasibility d;
    if (n == 0) {
        d.ok = true;
        return d;
    }
    for (const auto& v : detail::eval_dual_grid(eta, G)) d.grid_max = std::max(d.grid_max, std::abs(v));
    d.eta_inf = eta.cwiseAbs().maxCoeff();
    d.ok = d.grid_max <= 1.0 + tol && d.eta_inf <= lambda * (1.0 + tol);
    return d;
}

namespace {

struct Problem {
    int n = 0;
    double scale = 1.0;  // data were divided by this
    double lambda = 0.0;
    double gamma_orig = 0.0; // finite gamma in original units, 0 in equality mode
};

double atomic_bound(const AdmmState& st, int n) {
    return (n * st.u[0].real() + st.t) / (2.0 * std::sqrt(static_cast<double>(n)));
}

double objective(const AdmmState& st, const CVector& ys, const Problem& pb) {
    double obj = pb.scale * (atomic_bound(st, pb.n) + pb.lambda * st.z.cwiseAbs().sum());
    if (pb.gamma_orig > 0.0) obj += 0.5 * pb.gamma_orig * pb.scale * pb.scale * (ys - st.g - st.z).squaredNorm();
    return obj;
}

// Runs ADMM on data yk with scaled-problem parameters until the residual test passes
// or the iteration budget is spent. Returns true on convergence.
bool run_inner(AdmmState& st, const CVector& yk, const CVector& ys, double gamma_s, double& rho_s,
               const AdmmConfig& cfg, const Problem& pb, int& budget, SolveReport& rep, double tol_scale = 1.0) {
    const double sqn = std::sqrt(static_cast<double>(pb.n));
    const double eps_abs = 1e-14 * (pb.n + 1);
    AdmmStepParams p;
    p.xi = 1.0 / (gamma_s * sqn);
    p.lambda_p = pb.lambda / gamma_s;
    int local = 0;
    while (budget > 0) {
        p.rho = rho_s;
        const StepResiduals r = admm_step(st, yk, p);
        --budget;
        ++local;
        ++rep.iterations;
        if (cfg.record_trace) {
            rep.primal_residual_trace.push_back(r.primal);
            rep.dual_residual_trace.push_back(r.dual);
            rep.objective_trace.push_back(objective(st, ys, pb));
        }
        const double eps_p = tol_scale * cfg.primal_tol * std::max(r.x_norm, r.psi_norm) + eps_abs;
        const double eps_d = tol_scale * cfg.dual_tol * r.ups_norm + eps_abs;
        if (r.primal <= eps_p && r.dual <= eps_d) return true;
        if (cfg.adaptive_rho && local % 10 == 0) {
            // Residual balancing; Upsilon is unscaled so no rescaling is needed.
            const double rp = r.primal / eps_p;
            const double rd = r.dual / eps_d;
            if (rp > 10.0 * rd)
                rho_s *= 2.0;
            else if (rd > 10.0 * rp)
                rho_s /= 2.0;
        }
    }
    return false;
}

} // namespace

SolveReport admm_solve(const CVector& y, const AdmmConfig& cfg) {
    const int n = static_cast<int>(y.size());
    require(n >= 2, "admm_solve: need at least two samples");
    require(cfg.rho > 0.0, "admm_solve: rho must be positive");
    require(cfg.primal_tol > 0.0 && cfg.dual_tol > 0.0, "admm_solve: tolerances must be positive");
    require(cfg.max_iters >= 1, "admm_solve: max_iters must be positive");
    require(cfg.gamma > 0.0, "admm_solve: gamma must be positive");
    require(cfg.lambda >= 0.0, "admm_solve: lambda must be nonnegative");
    require(y.allFinite(), "admm_solve: data contain non-finite values");

    SolveReport rep;
    rep.lambda = cfg.lambda > 0.0 ? cfg.lambda : 1.0 / std::sqrt(static_cast<double>(n));
    rep.gamma = cfg.gamma;
    const double ynorm = y.norm();
    if (ynorm == 0.0) {
        rep.g_hat = CVector::Zero(n);
        rep.z_hat = CVector::Zero(n);
        rep.eta = CVector::Zero(n);
        rep.dual_feasibility = dual_feasibility_check(rep.eta, rep.lambda);
        rep.converged = true;
        return rep;
    }

    // The problem is positively homogeneous once gamma is rescaled, so solve on unit-RMS data.
    Problem pb;
    pb.n = n;
    pb.lambda = rep.lambda;
    pb.scale = ynorm / std::sqrt(static_cast<double>(n));
    const CVector ys = y / pb.scale;

    AdmmState st = AdmmState::zeros(n);
    int budget = cfg.max_iters;
    CVector eta;
    double gamma_s = 0.0;

    if (!cfg.equality_mode()) {
        pb.gamma_orig = cfg.gamma;
        gamma_s = cfg.gamma * pb.scale;
        double rho_s = cfg.rho / gamma_s;
        rep.converged = run_inner(st, ys, ys, gamma_s, rho_s, cfg, pb, budget, rep);
        rep.outer_iterations = 1;
        rep.final_rho = rho_s * gamma_s;
        eta = gamma_s * (ys - st.g - st.z);
    } else if (cfg.equality == EqualityStrategy::Bregman) {
        // Add back the constraint residual and re-solve with warm starts; the fixed point
        // satisfies y = g + z while gamma stays moderate.
        gamma_s = cfg.equality_gamma;
        double rho_s = cfg.rho / gamma_s;
        CVector yk = ys;
        const double target = cfg.equality_tol * ys.norm();
        double tol_scale = 1.0;
        double last = std::numeric_limits<double>::infinity();
        for (int outer = 0; outer < cfg.max_outer && budget > 0; ++outer) {
            const bool inner_ok = run_inner(st, yk, ys, gamma_s, rho_s, cfg, pb, budget, rep, tol_scale);
            ++rep.outer_iterations;
            eta = gamma_s * (yk - st.g - st.z);
            const CVector res = ys - st.g - st.z;
            const double rn = res.norm();
            if (inner_ok && rn <= target) {
                rep.converged = true;
                break;
            }
            // A stalled outer residual means inner solves are too loose to make progress.
            if (rn > 0.5 * last) tol_scale = std::max(tol_scale * 0.1, 1e-4);
            last = rn;
            yk += res;
        }
        rep.final_rho = rho_s * gamma_s;
    } else {
        gamma_s = cfg.gamma0;
        double rho_s = cfg.rho / gamma_s;
        const double target = cfg.equality_tol * ys.norm();
        for (int outer = 0; outer < cfg.max_outer && budget > 0; ++outer) {
            const bool inner_ok = run_inner(st, ys, ys, gamma_s, rho_s, cfg, pb, budget, rep);
            ++rep.outer_iterations;
            eta = gamma_s * (ys - st.g - st.z);
            if (inner_ok && (ys - st.g - st.z).norm() <= target) {
                rep.converged = true;
                break;
            }
            gamma_s *= 10.0;
            rho_s /= 10.0;
        }
        rep.final_rho = rho_s * gamma_s;
    }

    rep.g_hat = st.g * pb.scale;
    rep.z_hat = st.z * pb.scale;
    rep.eta = eta;
    rep.equality_residual = (y - rep.g_hat - rep.z_hat).norm() / ynorm;
    rep.dual_feasibility = dual_feasibility_check(rep.eta, rep.lambda);
    rep.primal_objective = pb.scale * (atomic_bound(st, n) + pb.lambda * st.z.cwiseAbs().sum());
    rep.dual_objective = (y.adjoint() * rep.eta)(0, 0).real();
    if (!cfg.equality_mode()) {
        const CVector r = y - rep.g_hat - rep.z_hat;
        rep.primal_objective += 0.5 * cfg.gamma * r.squaredNorm();
        rep.dual_objective -= rep.eta.squaredNorm() / (2.0 * cfg.gamma);
    }
    const double denom = std::max(std::abs(rep.primal_objective), 1e-300);
    rep.duality_gap = std::abs(rep.primal_objective - rep.dual_objective) / denom;
    return rep;
}

} // namespace sinespike
