#include "hybridprecoding/baseline.hpp"

#include "hybridprecoding/linalg.hpp"

namespace hp {

DigitalPrecoder bd_fully_digital_precoder(const ChannelRealization& ch, const SystemConfig& cfg) {
    const int ns = cfg.n_streams;
    DigitalPrecoder out;
    out.f_opt.reserve(ch.h.size());
    for (int k = 0; k < ch.n_carriers(); ++k) {
        CMatrix f(cfg.n_tx, cfg.total_streams());
        for (int u = 0; u < cfg.n_users; ++u) {
            const CMatrix null_basis = split_subspaces(stacked_channel(ch, k, u)).null_space;
            if (null_basis.cols() < ns)
                throw InfeasibleError("bd precoder: null space of the other users' channels has dimension " +
                                      std::to_string(null_basis.cols()) + " < n_streams = " + std::to_string(ns));
            const CMatrix effective = ch.h[k][u] * null_basis;
            Eigen::BDCSVD<CMatrix> svd(effective, Eigen::ComputeThinV);
            user_block(f, u, ns) = null_basis * svd.matrixV().leftCols(ns);
        }
        f *= std::sqrt(static_cast<double>(cfg.total_streams())) / f.norm();
        out.f_opt.push_back(std::move(f));
    }
    return out;
}

Combiner fully_digital_combiner(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                                const SystemConfig& cfg) {
    const int ns = cfg.n_streams;
    Combiner out;
    out.w.assign(ch.n_carriers(), std::vector<CMatrix>(cfg.n_users));
    out.rank_deficient.assign(ch.n_carriers(), std::vector<bool>(cfg.n_users, false));
    for (int k = 0; k < ch.n_carriers(); ++k) {
        for (int u = 0; u < cfg.n_users; ++u) {
            const CMatrix effective = ch.h[k][u] * user_block(precoders[k], u, ns);
            Eigen::BDCSVD<CMatrix> svd(effective, Eigen::ComputeThinU);
            const auto& s = svd.singularValues();
            Eigen::Index rank = 0;
            const double cutoff = s.size() > 0 ? kRankTolerance * s(0) : 0.0;
            while (rank < s.size() && s(rank) > cutoff && s(rank) > 0.0) ++rank;
            const Eigen::Index keep = std::min<Eigen::Index>(rank, ns);
            if (keep < ns) {
                out.w[k][u] = orthonormal_completion(svd.matrixU().leftCols(keep), ns);
                out.rank_deficient[k][u] = true;
            } else {
                out.w[k][u] = svd.matrixU().leftCols(ns);
            }
        }
    }
    return out;
}

}  // namespace hp
