#include "hybridprecoding/evaluation.hpp"

#include <cmath>

namespace hp {

CMatrix interference_covariance(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                                const Combiner& comb, const EvalParams& ep, int n_streams, int k, int u) {
    const CMatrix& h = ch.h[k][u];
    const CMatrix& w = comb.w[k][u];
    const CMatrix& f = precoders[k];
    const int n_users = static_cast<int>(f.cols()) / n_streams;

    const CMatrix wh = w.adjoint() * h;
    CMatrix r = ep.noise_var * (w.adjoint() * w);
    for (int j = 0; j < n_users; ++j) {
        if (j == u) continue;
        const CMatrix g = wh * user_block(f, j, n_streams);
        r.noalias() += ep.rho_u * g * g.adjoint();
    }
    // Exact Hermitian symmetry for the downstream Cholesky.
    return (r + r.adjoint()) / 2.0;
}

double log2_det_hpd(const CMatrix& m) {
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success) throw SolverError("log2_det_hpd: matrix is not positive definite");
    const CMatrix& l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
    return 2.0 * acc;
}

EvalRecord spectral_efficiency(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                               const Combiner& comb, const EvalParams& ep, int n_streams) {
    if (!(ep.noise_var > 0.0)) throw ConfigError("spectral_efficiency: noise_var must be > 0");
    const int n_k = ch.n_carriers();
    const int n_u = ch.n_users();
    EvalRecord rec;
    rec.rate.assign(n_k, std::vector<double>(n_u, 0.0));
    rec.interference.assign(n_k, std::vector<double>(n_u, 0.0));
    rec.sum_rate.assign(n_k, 0.0);
    for (int k = 0; k < n_k; ++k) {
        for (int u = 0; u < n_u; ++u) {
            const CMatrix r = interference_covariance(ch, precoders, comb, ep, n_streams, k, u);
            const CMatrix& w = comb.w[k][u];
            rec.interference[k][u] = (r - ep.noise_var * (w.adjoint() * w)).trace().real();

            // Whiten with R = L L^H: det(I + R^{-1} S) = det(I + L^{-1} S L^{-H}).
            Eigen::LLT<CMatrix> llt(r);
            if (llt.info() != Eigen::Success)
                throw SolverError("spectral_efficiency: interference covariance is not positive definite");
            const CMatrix g = comb.w[k][u].adjoint() * ch.h[k][u] * user_block(precoders[k], u, n_streams);
            const CMatrix white = llt.matrixL().solve(g);
            CMatrix m = ep.rho_u * white * white.adjoint();
            m.diagonal().array() += 1.0;
            const double rate = log2_det_hpd((m + m.adjoint()) / 2.0);
            rec.rate[k][u] = std::max(0.0, rate);
            rec.sum_rate[k] += rec.rate[k][u];
        }
        rec.mean_sum_se += rec.sum_rate[k];
    }
    rec.mean_sum_se /= n_k;
    return rec;
}

double PowerModel::p_ps(int bits) const {
    if (bits < 1 || bits > static_cast<int>(p_ps_by_bits.size()))
        throw ConfigError("power model: no phase-shifter power for " + std::to_string(bits) + " bits");
    return p_ps_by_bits[bits - 1];
}

DeviceCount device_count(const Architecture& arch, const SystemConfig& cfg, const PowerModel& pm) {
    validate(arch, cfg.n_tx, cfg.n_rf_tx);
    const long n_tx = cfg.n_tx;
    const long n_rf = cfg.n_rf_tx;
    const bool subarrays = arch.connectivity != Connectivity::FullyConnected;
    const int shifter_bits = subarrays ? pm.subarray_phase_shifter_bits : pm.fc_phase_shifter_bits;

    // Analog connections (RF chain to antenna) and the switches that route them.
    long connections = n_tx * n_rf;
    long routing_switches = 0;
    if (subarrays) {
        const long size = arch.subarray_size(cfg.n_tx, cfg.n_rf_tx);
        connections = static_cast<long>(arch.l_max) * n_rf * size;
        // One closed switch per RF-chain-to-subarray link; AoSA links are hard-wired.
        if (arch.connectivity == Connectivity::DAoSA) routing_switches = static_cast<long>(arch.l_max) * n_rf;
    }

    DeviceCount d;
    d.switches = routing_switches;
    switch (arch.element) {
        case Element::UPS:
            d.phase_shifters = connections;
            d.phase_shifter_bits = shifter_bits;
            break;
        case Element::QPS:
            d.phase_shifters = connections;
            d.phase_shifter_bits = arch.n_bits;
            break;
        case Element::DPS:
            d.phase_shifters = 2 * connections;
            d.phase_shifter_bits = shifter_bits;
            break;
        case Element::SI:
            // A switched line pair with inverter costs as a 1-bit phase shifter.
            d.phase_shifters = connections;
            d.phase_shifter_bits = 1;
            break;
        case Element::Switch: d.switches += connections; break;
        case Element::AntennaSelection:
            if (subarrays) throw ConfigError("power model: antenna selection requires full connectivity");
            d.switches = n_tx;
            break;
    }
    return d;
}

double power_consumption(const Architecture& arch, const SystemConfig& cfg, const PowerModel& pm) {
    const DeviceCount d = device_count(arch, cfg, pm);
    double mw = pm.p_bb + (pm.p_dac + pm.p_os + pm.p_m) * cfg.n_rf_tx + (pm.p_pa + pm.p_pc) * cfg.n_tx +
                pm.p_swi * static_cast<double>(d.switches) + pm.p_t;
    if (d.phase_shifters > 0) mw += pm.p_ps(d.phase_shifter_bits) * static_cast<double>(d.phase_shifters);
    return mw / 1000.0;
}

double fully_digital_power(const SystemConfig& cfg, const PowerModel& pm) {
    const double mw = pm.p_bb + (pm.p_dac + pm.p_os + pm.p_m) * cfg.n_tx + (pm.p_pa + pm.p_pc) * cfg.n_tx + pm.p_t;
    return mw / 1000.0;
}

ResidualMetrics residual_metrics(std::span<const CMatrix> f_opt, std::span<const CMatrix> precoders,
                                 const ChannelRealization& ch, int n_streams) {
    ResidualMetrics m;
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < f_opt.size(); ++k) {
        err += (f_opt[k] - precoders[k]).squaredNorm();
        ref += f_opt[k].squaredNorm();
    }
    m.approximation = ref > 0.0 ? err / ref : 0.0;

    const int n_u = ch.n_users();
    m.leakage.assign(ch.n_carriers(), std::vector<double>(n_u, 0.0));
    double total = 0.0;
    for (int k = 0; k < ch.n_carriers(); ++k)
        for (int u = 0; u < n_u; ++u) {
            m.leakage[k][u] = (stacked_channel(ch, k, u) * user_block(precoders[k], u, n_streams)).squaredNorm();
            total += m.leakage[k][u];
        }
    m.mean_leakage = total / (static_cast<double>(ch.n_carriers()) * n_u);
    return m;
}

}  // namespace hp
