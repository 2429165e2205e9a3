#include "hybridprecoding/system.hpp"

#include <cmath>
#include <string>

namespace hp {

void validate(const SystemConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (cfg.n_tx < 1 || cfg.n_rx < 1 || cfg.n_users < 1 || cfg.n_streams < 1 || cfg.n_rf_tx < 1)
        fail("system: all dimensions must be positive");
    if (upa_side(cfg.n_tx) < 0)
        fail("system.n_tx = " + std::to_string(cfg.n_tx) +
             " is not a perfect square; the transmitter is a sqrt(N) x sqrt(N) planar array");
    if (upa_side(cfg.n_rx) < 0)
        fail("system.n_rx = " + std::to_string(cfg.n_rx) +
             " is not a perfect square; each receiver is a sqrt(N) x sqrt(N) planar array");
    if (cfg.total_streams() > cfg.n_rf_tx)
        fail("system: n_users * n_streams = " + std::to_string(cfg.total_streams()) +
             " exceeds n_rf_tx = " + std::to_string(cfg.n_rf_tx) +
             " (requires N_u N_s <= N_RF^tx <= N_tx)");
    if (cfg.n_rf_tx > cfg.n_tx)
        fail("system: n_rf_tx exceeds n_tx (requires N_u N_s <= N_RF^tx <= N_tx)");
    if (cfg.n_streams > cfg.n_rx) fail("system: n_streams exceeds n_rx");
    if (cfg.n_carriers < 1) fail("system.n_carriers must be >= 1");
    if (!(cfg.bandwidth >= 0.0)) fail("system.bandwidth must be >= 0");
    if (!(cfg.f_c > 0.0)) fail("system.f_c must be > 0");
    if (!(cfg.noise_var > 0.0)) fail("system.noise_var must be > 0");
    if (!(cfg.rho_u > 0.0)) fail("system.rho_u must be > 0");
}

double subcarrier_frequency(const SystemConfig& cfg, int k) {
    const double f = cfg.n_carriers;
    return cfg.f_c + cfg.bandwidth / f * (static_cast<double>(k) - (f - 1.0) / 2.0);
}

int upa_side(int n) {
    if (n < 1) return -1;
    int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return side * side == n ? side : -1;
}

}  // namespace hp
