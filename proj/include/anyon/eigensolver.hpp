#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace anyon {

/// Applies a linear operator to every column of a block.
using BlockOperator = std::function<void(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out)>;
/// Preconditioner; column j of `in` is a residual for the Ritz value ritz[j].
using BlockPreconditioner =
    std::function<void(const Eigen::MatrixXcd& in, const Eigen::VectorXd& ritz, Eigen::MatrixXcd& out)>;

struct LobpcgOptions {
    int max_iter = 3000;
    // Converged when ||H x - lambda x|| <= tol * (1 + |lambda|) (x unit norm).
    double tol = 1e-8;
    // Extra block columns carried beyond the requested count.
    int guard = -1;  // -1 selects max(4, m / 10)
    std::uint64_t seed = 7;
};

struct EigenPairs {
    std::vector<double> values;
    Eigen::MatrixXcd vectors;  // orthonormal columns (Euclidean)
    std::vector<double> residuals;
    int iterations = 0;
};

/// Lowest m eigenpairs of a Hermitian operator of dimension dim by
/// locally optimal block preconditioned conjugate gradients with soft
/// locking. Throws NumericalError (with the worst residuals) when the
/// iteration cap is reached.
EigenPairs lobpcg(const BlockOperator& apply_H, const BlockPreconditioner& apply_T, Eigen::Index dim, int m,
                    const LobpcgOptions& opt = {});

/// Lowest m eigenpairs of a dense real symmetric / complex Hermitian matrix
/// (LAPACK MRRR driver). Only the upper triangle is read; the matrix is
/// overwritten. Residuals are left empty.
EigenPairs dense_lowest(Eigen::MatrixXd& H, int m);
EigenPairs dense_lowest(Eigen::MatrixXcd& H, int m);

} // namespace anyon
