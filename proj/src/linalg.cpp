#include "hybridprecoding/linalg.hpp"

namespace hp {

CMatrix orthonormal_completion(const CMatrix& w, Eigen::Index cols) {
    const Eigen::Index n = w.rows();
    CMatrix out(n, cols);
    out.leftCols(w.cols()) = w;
    Eigen::Index filled = w.cols();
    for (Eigen::Index e = 0; e < n && filled < cols; ++e) {
        CVector v = CVector::Unit(n, e);
        for (int pass = 0; pass < 2; ++pass) v -= out.leftCols(filled) * (out.leftCols(filled).adjoint() * v);
        const double norm = v.norm();
        if (norm < 1e-6) continue;
        out.col(filled++) = v / norm;
    }
    return out;
}

}  // namespace hp
