#pragma once

#include "hybridprecoding/system.hpp"
#include "hybridprecoding/types.hpp"

namespace hp {

enum class ChannelMode { Clustered, Uncorrelated };

struct ChannelParams {
    int n_clusters = 6;
    int n_rays = 4;
    double angular_spread_deg = 10.0;
    bool los_enabled = false;
    double los_power_ratio = 10.0;  // E|a_LOS|^2 over total NLOS power
    double delay_spread = 20e-9;    // s, upper bound of cluster delays
    bool beam_split_enabled = false;
    ChannelMode mode = ChannelMode::Clustered;
};

void validate(const ChannelParams& prm);

/// Angles in radians. `cluster == -1` marks the line-of-sight path.
struct PathInfo {
    int user = 0;
    int cluster = 0;
    int ray = 0;
    Complex gain;
    double delay = 0.0;
    double aod_azimuth = 0.0;
    double aod_elevation = 0.0;
    double aoa_azimuth = 0.0;
    double aoa_elevation = 0.0;
    bool is_los = false;
};

struct ChannelRealization {
    PerCarrierUser h;  // [k][u], each n_rx x n_tx
    std::vector<PathInfo> paths;
    double gamma = 1.0;

    int n_carriers() const { return static_cast<int>(h.size()); }
    int n_users() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
};

/// Planar-array steering vector with half-wavelength spacing at f_c.
///
/// Antenna (p, q) of the sqrt(N) x sqrt(N) grid sits at index p * sqrt(N) + q and
/// carries exp(j pi r (p sin(theta) sin(phi) + q cos(theta))) / sqrt(N), where r is
/// the ratio of the evaluation frequency to f_c (r = 1 ignores beam split).
CVector upa_response(double phi, double theta, int n_antennas, double freq_ratio = 1.0);

/// Clustered wideband geometric channel. One set of paths per realization is
/// shared by all subcarriers; subcarrier k only changes the delay phase and,
/// with beam split enabled, the array responses.
ChannelRealization sample_channel(const SystemConfig& cfg, const ChannelParams& prm, Rng& rng);

/// Every entry of every H_{k,u} i.i.d. CN(0, 1), each subcarrier drawn independently.
ChannelRealization sample_uncorrelated_channel(const SystemConfig& cfg, Rng& rng);

/// Dispatches on prm.mode.
ChannelRealization sample(const SystemConfig& cfg, const ChannelParams& prm, Rng& rng);

/// Rows of all users except `u` at subcarrier k, stacked in user order.
CMatrix stacked_channel(const ChannelRealization& ch, int k, int u);

}  // namespace hp
