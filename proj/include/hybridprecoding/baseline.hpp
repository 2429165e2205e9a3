#pragma once

#include <span>

#include "hybridprecoding/channel.hpp"
#include "hybridprecoding/system.hpp"

namespace hp {

/// Fully digital precoder: one n_tx x (n_users * n_streams) matrix per subcarrier,
/// user u owning columns [u * n_streams, (u + 1) * n_streams).
struct DigitalPrecoder {
    PerCarrier f_opt;
};

/// Block-diagonalization precoder with equal power per stream, normalized to
/// ||F_k||_F^2 = n_users * n_streams. Throws InfeasibleError when the null space
/// of another users' stacked channel is too small to carry n_streams.
DigitalPrecoder bd_fully_digital_precoder(const ChannelRealization& ch, const SystemConfig& cfg);

/// Per-user receive filter, n_rx x n_streams with orthonormal columns.
struct Combiner {
    PerCarrierUser w;                               // [k][u]
    std::vector<std::vector<bool>> rank_deficient;  // [k][u], true when completed
};

/// Matched fully digital combiner: the n_streams dominant left singular vectors of
/// H_{k,u} F_{k,u}. `precoders[k]` is the complete n_tx x (n_users * n_streams) precoder.
Combiner fully_digital_combiner(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                                const SystemConfig& cfg);

/// Columns of user u inside a full precoder.
inline auto user_block(const CMatrix& f, int u, int n_streams) {
    return f.middleCols(static_cast<Eigen::Index>(u) * n_streams, n_streams);
}
inline auto user_block(CMatrix& f, int u, int n_streams) {
    return f.middleCols(static_cast<Eigen::Index>(u) * n_streams, n_streams);
}

}  // namespace hp
