#pragma once

#include <span>

#include "hybridprecoding/architecture.hpp"
#include "hybridprecoding/baseline.hpp"
#include "hybridprecoding/channel.hpp"
#include "hybridprecoding/system.hpp"

namespace hp {

/// SNR is rho_u / noise_var; sweeps vary noise_var with rho_u = 1.
struct EvalParams {
    double noise_var = 1.0;
    double rho_u = 1.0;

    static EvalParams from_snr_db(double snr_db, double rho_u = 1.0) {
        return {rho_u / std::pow(10.0, snr_db / 10.0), rho_u};
    }
};

struct EvalRecord {
    std::vector<std::vector<double>> rate;          // [k][u], bits/s/Hz
    std::vector<double> sum_rate;                   // [k]
    double mean_sum_se = 0.0;                       // subcarrier average of sum_rate
    std::vector<std::vector<double>> interference;  // [k][u], tr(W^H H sum_{j!=u} F_j F_j^H H^H W) rho_u
};

/// Interference-plus-noise covariance after the combiner of user u on subcarrier k.
CMatrix interference_covariance(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                                const Combiner& comb, const EvalParams& ep, int n_streams, int k, int u);

/// Gaussian-signalling rate log2 det(I + R^{-1} rho_u G G^H), G = W^H H F_u, for every (k, u).
EvalRecord spectral_efficiency(const ChannelRealization& ch, std::span<const CMatrix> precoders,
                               const Combiner& comb, const EvalParams& ep, int n_streams);

/// log2 det of a Hermitian positive definite matrix.
double log2_det_hpd(const CMatrix& m);

/// Device powers in milliwatts.
struct PowerModel {
    double p_bb = 200.0;
    double p_dac = 110.0;
    double p_os = 4.0;
    double p_m = 22.0;
    double p_pa = 60.0;
    double p_pc = 6.6;
    double p_swi = 24.0;
    double p_t = 100.0;
    std::vector<double> p_ps_by_bits = {10.0, 20.0, 40.0, 100.0};  // 1..4 bits
    int fc_phase_shifter_bits = 4;        // resolution assumed for continuous shifters, fully connected
    int subarray_phase_shifter_bits = 3;  // same, for AoSA / DAoSA

    double p_ps(int bits) const;
};

/// Device counts entering the power budget.
struct DeviceCount {
    long phase_shifters = 0;
    int phase_shifter_bits = 0;
    long switches = 0;
};

DeviceCount device_count(const Architecture& arch, const SystemConfig& cfg, const PowerModel& pm = {});

/// Total transmitter power in watts.
double power_consumption(const Architecture& arch, const SystemConfig& cfg, const PowerModel& pm = {});

/// Fully digital transmitter (one RF chain per antenna, no analog network), watts.
double fully_digital_power(const SystemConfig& cfg, const PowerModel& pm = {});

struct ResidualMetrics {
    double approximation = 0.0;                // sum_k ||F_opt,k - F_k||^2 / sum_k ||F_opt,k||^2
    std::vector<std::vector<double>> leakage;  // [k][u], ||H_bar_{k,u} F_{k,u}||_F^2
    double mean_leakage = 0.0;                 // average over (k, u)
};

ResidualMetrics residual_metrics(std::span<const CMatrix> f_opt, std::span<const CMatrix> precoders,
                                 const ChannelRealization& ch, int n_streams);

}  // namespace hp
