#include "anyon/eigensolver.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "anyon/errors.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace anyon {

namespace {

using Mat = Eigen::MatrixXcd;

// Orthonormalize the columns of Q (SVQB), dropping directions whose Gram
// eigenvalue falls below drop * largest. May return fewer columns.
Mat svqb(const Mat& Q, double drop = 1e-13) {
    if (Q.cols() == 0) return Q;
    Eigen::VectorXd scale = Q.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) scale[j] = scale[j] > 0.0 ? 1.0 / scale[j] : 0.0;
    const Mat Qs = Q * scale.asDiagonal();
    Mat G = Qs.adjoint() * Qs;
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    const auto& ev = es.eigenvalues();
    const double top = ev.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < ev.size(); ++j)
        if (ev[j] > drop * top) keep.push_back(j);
    Mat B(Q.cols(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        B.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(ev[keep[c]]);
    return Qs * B;
}

void project_out(const Mat& X, Mat& Q) {
    if (Q.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) Q -= X * (X.adjoint() * Q);
}

Mat gather(const Mat& M, const std::vector<Eigen::Index>& cols) {
    Mat out(M.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = M.col(cols[c]);
    return out;
}

} // namespace

EigenPairs lobpcg(const BlockOperator& apply_H, const BlockPreconditioner& apply_T, Eigen::Index dim, int m,
                    const LobpcgOptions& opt) {
    if (m < 1) throw PreconditionError("lobpcg: need at least one eigenpair");
    const int guard = opt.guard >= 0 ? opt.guard : std::max(4, m / 10);
    const Eigen::Index K = std::min<Eigen::Index>(m + guard, dim);
    if (m > K) throw PreconditionError("lobpcg: more eigenpairs requested than the dimension");

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    Mat X(dim, K);
    for (Eigen::Index j = 0; j < K; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            X(i, j) = {re, im};
        }
    {
        // Smooth the start with the preconditioner; it favours low modes.
        Mat TX(dim, K);
        apply_T(X, Eigen::VectorXd::Zero(K), TX);
        X = svqb(TX);
        if (X.cols() < K) throw NumericalError("lobpcg: degenerate random start");
    }

    Mat HX(dim, K);
    apply_H(X, HX);
    Eigen::VectorXd lambda(K);
    {
        Mat A = X.adjoint() * HX;
        A = 0.5 * (A + A.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        X = X * es.eigenvectors();
        HX = HX * es.eigenvectors();
        lambda = es.eigenvalues();
    }

    Mat P(dim, 0);
    Eigen::VectorXd res(K);
    EigenPairs out;
    for (int it = 0; it <= opt.max_iter; ++it) {
        const Mat R = HX - X * lambda.asDiagonal();
        res = R.colwise().norm().transpose();
        std::vector<Eigen::Index> active;
        bool done = true;
        for (Eigen::Index j = 0; j < K; ++j) {
            const bool ok = res[j] <= opt.tol * (1.0 + std::abs(lambda[j]));
            if (!ok) {
                active.push_back(j);
                if (j < m) done = false;
            }
        }
        out.iterations = it;
        if (done) break;
        if (it == opt.max_iter) {
            std::ostringstream msg;
            msg << "lobpcg: no convergence after " << it << " iterations; worst residuals:";
            for (Eigen::Index j = 0; j < m; ++j)
                if (res[j] > opt.tol * (1.0 + std::abs(lambda[j])))
                    msg << " [" << j << "] lambda=" << lambda[j] << " r=" << res[j];
            throw NumericalError(msg.str());
        }

        const Mat Ra = gather(R, active);
        Mat W(dim, Ra.cols());
        Eigen::VectorXd ritz(Ra.cols());
        for (std::size_t c = 0; c < active.size(); ++c) ritz[static_cast<Eigen::Index>(c)] = lambda[active[c]];
        apply_T(Ra, ritz, W);
        Mat Q(dim, W.cols() + (P.cols() ? static_cast<Eigen::Index>(active.size()) : 0));
        Q.leftCols(W.cols()) = W;
        if (P.cols()) Q.rightCols(static_cast<Eigen::Index>(active.size())) = gather(P, active);
        project_out(X, Q);
        Q = svqb(Q);
        project_out(X, Q);
        Q = svqb(Q);
        if (Q.cols() == 0) throw NumericalError("lobpcg: search space collapsed");

        Mat HQ(dim, Q.cols());
        apply_H(Q, HQ);

        const Eigen::Index ns = K + Q.cols();
        Mat A(ns, ns);
        A.topLeftCorner(K, K) = X.adjoint() * HX;
        A.topRightCorner(K, Q.cols()) = X.adjoint() * HQ;
        A.bottomRightCorner(Q.cols(), Q.cols()) = Q.adjoint() * HQ;
        A.bottomLeftCorner(Q.cols(), K) = A.topRightCorner(K, Q.cols()).adjoint();
        A = 0.5 * (A + A.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        const Mat C = es.eigenvectors().leftCols(K);
        const Mat Cx = C.topRows(K);
        const Mat Cq = C.bottomRows(Q.cols());

        P = Q * Cq;
        const Mat HP = HQ * Cq;
        X = X * Cx + P;
        HX = HX * Cx + HP;
        lambda = es.eigenvalues().head(K);
    }

    out.values.assign(lambda.data(), lambda.data() + m);
    out.vectors = X.leftCols(m);
    out.residuals.assign(res.data(), res.data() + m);
    return out;
}

EigenPairs dense_lowest(Eigen::MatrixXd& H, int m) {
    const auto N = static_cast<lapack_int>(H.rows());
    if (H.cols() != H.rows()) throw ShapeError("dense_lowest: matrix must be square");
    if (m < 1 || m > N) throw PreconditionError("dense_lowest: bad eigenpair count");
    std::vector<double> w(static_cast<std::size_t>(N));
    Eigen::MatrixXd Z(N, m);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(m));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', N, H.data(), N, 0.0, 0.0, 1, m,
                                           LAPACKE_dlamch('S'), &found, w.data(), Z.data(), N, support.data());
    if (info != 0 || found != m)
        throw NumericalError("dense_lowest: LAPACK dsyevr failed (info " + std::to_string(info) + ")");
    EigenPairs out;
    out.values.assign(w.begin(), w.begin() + m);
    out.vectors = Z.cast<std::complex<double>>();
    return out;
}

EigenPairs dense_lowest(Eigen::MatrixXcd& H, int m) {
    const auto N = static_cast<lapack_int>(H.rows());
    if (H.cols() != H.rows()) throw ShapeError("dense_lowest: matrix must be square");
    if (m < 1 || m > N) throw PreconditionError("dense_lowest: bad eigenpair count");
    std::vector<double> w(static_cast<std::size_t>(N));
    Eigen::MatrixXcd Z(N, m);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(m));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', N, H.data(), N, 0.0, 0.0, 1, m,
                                           LAPACKE_dlamch('S'), &found, w.data(), Z.data(), N, support.data());
    if (info != 0 || found != m)
        throw NumericalError("dense_lowest: LAPACK zheevr failed (info " + std::to_string(info) + ")");
    EigenPairs out;
    out.values.assign(w.begin(), w.begin() + m);
    out.vectors = std::move(Z);
    return out;
}

} // namespace anyon
