#include "hybridprecoding/channel.hpp"

#include <cmath>
#include <numbers>

namespace hp {

namespace {

constexpr double kPi = std::numbers::pi;

Complex circular_gaussian(Rng& rng, double variance) {
    if (variance <= 0.0) return {0.0, 0.0};
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

struct Angles {
    double aod_az, aod_el, aoa_az, aoa_el;
};

Angles uniform_angles(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    Angles a{};
    a.aod_az = u(rng);
    a.aod_el = u(rng);
    a.aoa_az = u(rng);
    a.aoa_el = u(rng);
    return a;
}

}  // namespace

void validate(const ChannelParams& prm) {
    if (prm.n_clusters < 1) throw ConfigError("channel.n_clusters must be >= 1");
    if (prm.n_rays < 1) throw ConfigError("channel.n_rays must be >= 1");
    if (!(prm.angular_spread_deg >= 0.0)) throw ConfigError("channel.angular_spread_deg must be >= 0");
    if (!(prm.delay_spread >= 0.0)) throw ConfigError("channel.delay_spread must be >= 0");
    if (!(prm.los_power_ratio >= 0.0)) throw ConfigError("channel.los_power_ratio must be >= 0");
}

CVector upa_response(double phi, double theta, int n_antennas, double freq_ratio) {
    const int side = upa_side(n_antennas);
    if (side < 0)
        throw ConfigError("upa_response: " + std::to_string(n_antennas) +
                          " antennas do not form a square planar array");
    if (!(freq_ratio > 0.0)) throw ConfigError("upa_response: freq_ratio must be positive");

    const double u = kPi * freq_ratio * std::sin(theta) * std::sin(phi);
    const double v = kPi * freq_ratio * std::cos(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    CVector a(n_antennas);
    for (int p = 0; p < side; ++p)
        for (int q = 0; q < side; ++q) a(p * side + q) = std::polar(scale, p * u + q * v);
    return a;
}

ChannelRealization sample_channel(const SystemConfig& cfg, const ChannelParams& prm, Rng& rng) {
    validate(prm);
    const int n_paths = prm.n_clusters * prm.n_rays;
    const double ray_var = 1.0 / n_paths;
    const double los_var = prm.los_enabled ? prm.los_power_ratio : 0.0;
    const double spread = prm.angular_spread_deg * kPi / 180.0;

    ChannelRealization ch;
    // E||sum of paths||_F^2 = total gain variance, since steering vectors have unit norm.
    ch.gamma = std::sqrt(static_cast<double>(cfg.n_tx) * cfg.n_rx / (1.0 + los_var));

    std::uniform_real_distribution<double> delay_dist(0.0, prm.delay_spread);
    std::normal_distribution<double> jitter(0.0, spread > 0.0 ? spread : 1.0);
    auto perturb = [&](double mean) { return spread > 0.0 ? mean + jitter(rng) : mean; };

    for (int u = 0; u < cfg.n_users; ++u) {
        if (prm.los_enabled) {
            Angles a = uniform_angles(rng);
            PathInfo p;
            p.user = u;
            p.cluster = -1;
            p.ray = 0;
            p.gain = circular_gaussian(rng, los_var);
            p.delay = 0.0;
            p.aod_azimuth = a.aod_az;
            p.aod_elevation = a.aod_el;
            p.aoa_azimuth = a.aoa_az;
            p.aoa_elevation = a.aoa_el;
            p.is_los = true;
            ch.paths.push_back(p);
        }
        for (int c = 0; c < prm.n_clusters; ++c) {
            Angles mean = uniform_angles(rng);
            const double tau = prm.delay_spread > 0.0 ? delay_dist(rng) : 0.0;
            for (int r = 0; r < prm.n_rays; ++r) {
                PathInfo p;
                p.user = u;
                p.cluster = c;
                p.ray = r;
                p.delay = tau;
                p.aod_azimuth = perturb(mean.aod_az);
                p.aod_elevation = perturb(mean.aod_el);
                p.aoa_azimuth = perturb(mean.aoa_az);
                p.aoa_elevation = perturb(mean.aoa_el);
                p.gain = circular_gaussian(rng, ray_var);
                ch.paths.push_back(p);
            }
        }
    }

    ch.h.assign(cfg.n_carriers, std::vector<CMatrix>(cfg.n_users));
    for (int k = 0; k < cfg.n_carriers; ++k) {
        const double f_k = subcarrier_frequency(cfg, k);
        const double ratio = prm.beam_split_enabled ? f_k / cfg.f_c : 1.0;
        for (int u = 0; u < cfg.n_users; ++u) ch.h[k][u] = CMatrix::Zero(cfg.n_rx, cfg.n_tx);
        for (const PathInfo& p : ch.paths) {
            // Reduce the cycle count before forming the phase to keep precision at THz carriers.
            const double cycles = std::fmod(p.delay * f_k, 1.0);
            const Complex coeff = ch.gamma * p.gain * std::polar(1.0, -2.0 * kPi * cycles);
            CVector a_r = upa_response(p.aoa_azimuth, p.aoa_elevation, cfg.n_rx, ratio);
            CVector a_t = upa_response(p.aod_azimuth, p.aod_elevation, cfg.n_tx, ratio);
            ch.h[k][p.user].noalias() += coeff * a_r * a_t.adjoint();
        }
    }
    return ch;
}

ChannelRealization sample_uncorrelated_channel(const SystemConfig& cfg, Rng& rng) {
    ChannelRealization ch;
    ch.gamma = 1.0;
    ch.h.assign(cfg.n_carriers, std::vector<CMatrix>(cfg.n_users));
    for (int k = 0; k < cfg.n_carriers; ++k)
        for (int u = 0; u < cfg.n_users; ++u) {
            CMatrix h(cfg.n_rx, cfg.n_tx);
            for (Eigen::Index j = 0; j < h.cols(); ++j)
                for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) = circular_gaussian(rng, 1.0);
            ch.h[k][u] = std::move(h);
        }
    return ch;
}

ChannelRealization sample(const SystemConfig& cfg, const ChannelParams& prm, Rng& rng) {
    return prm.mode == ChannelMode::Uncorrelated ? sample_uncorrelated_channel(cfg, rng)
                                                 : sample_channel(cfg, prm, rng);
}

CMatrix stacked_channel(const ChannelRealization& ch, int k, int u) {
    const auto& users = ch.h.at(k);
    const Eigen::Index n_rx = users.front().rows();
    const Eigen::Index n_tx = users.front().cols();
    CMatrix h_bar(n_rx * (static_cast<Eigen::Index>(users.size()) - 1), n_tx);
    Eigen::Index row = 0;
    for (int v = 0; v < static_cast<int>(users.size()); ++v) {
        if (v == u) continue;
        h_bar.middleRows(row, n_rx) = users[v];
        row += n_rx;
    }
    return h_bar;
}

}  // namespace hp
