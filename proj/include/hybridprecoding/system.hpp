#pragma once

#include "hybridprecoding/types.hpp"

namespace hp {

/// Dimensions and carrier parameters shared by every stage of the simulator.
struct SystemConfig {
    int n_tx = 64;
    int n_rx = 4;
    int n_users = 4;
    int n_streams = 1;
    int n_rf_tx = 4;
    int n_carriers = 1;
    double f_c = 28e9;       // Hz
    double bandwidth = 0.0;  // Hz
    double noise_var = 1.0;
    double rho_u = 1.0;

    int total_streams() const { return n_users * n_streams; }
};

/// Throws ConfigError naming the first violated constraint.
void validate(const SystemConfig& cfg);

/// Frequency of subcarrier k (0-based), centred on f_c.
double subcarrier_frequency(const SystemConfig& cfg, int k);

/// Side length of a square planar array, or -1 when n is not a perfect square.
int upa_side(int n);

}  // namespace hp
