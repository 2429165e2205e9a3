#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "hybridprecoding/types.hpp"

namespace hp {

/// Orthonormal basis split of a matrix's input space: `row_space` spans the
/// right singular vectors with nonzero singular values, `null_space` the rest.
template <typename Scalar>
struct SubspaceSplit {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> row_space;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> null_space;
};

/// Full SVD; singular values below `rel_tol` times the largest count as zero.
template <typename Derived>
SubspaceSplit<typename Derived::Scalar> split_subspaces(const Eigen::MatrixBase<Derived>& a,
                                                        double rel_tol = kRankTolerance) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = a.cols();
    SubspaceSplit<Scalar> out;
    if (a.rows() == 0) {
        out.row_space = Mat(n, 0);
        out.null_space = Mat::Identity(n, n);
        return out;
    }
    Eigen::BDCSVD<Mat> svd(a.derived(), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    out.row_space = svd.matrixV().leftCols(rank);
    out.null_space = svd.matrixV().rightCols(n - rank);
    return out;
}

/// Orthogonal projection of the columns of `a` onto the complement of span(row_basis).
/// `row_basis` must have orthonormal columns.
template <typename DerivedA, typename DerivedV>
typename DerivedA::PlainObject remove_subspace(const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedV>& row_basis) {
    typename DerivedA::PlainObject x = a;
    if (row_basis.cols() > 0) x.noalias() -= row_basis * (row_basis.adjoint() * a);
    return x;
}

/// Frobenius-sphere projection: rescale `y` so that ||y||_F^2 = target.
/// A zero input has no nearest point; a uniform-magnitude matrix is returned and
/// `degenerate` (when given) is set.
template <typename Derived>
typename Derived::PlainObject project_power_ball(const Eigen::MatrixBase<Derived>& y, double target,
                                                 bool* degenerate = nullptr) {
    using Plain = typename Derived::PlainObject;
    const double norm = y.norm();
    if (degenerate) *degenerate = false;
    if (norm == 0.0) {
        if (degenerate) *degenerate = true;
        const double entries = static_cast<double>(y.rows() * y.cols());
        return Plain::Constant(y.rows(), y.cols(), std::sqrt(target / entries));
    }
    return y * (std::sqrt(target) / norm);
}

/// Columns of `w` completed to an orthonormal set of `cols` columns; `w` must already
/// have orthonormal columns. Deterministic (canonical vectors, Gram-Schmidt).
CMatrix orthonormal_completion(const CMatrix& w, Eigen::Index cols);

}  // namespace hp
