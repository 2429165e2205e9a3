#pragma once

#include <string>
#include <string_view>

#include "hybridprecoding/types.hpp"

namespace hp {

enum class Connectivity { FullyConnected, AoSA, DAoSA };

enum class Element { UPS, QPS, SI, Switch, AntennaSelection, DPS };

/// Analog network: how RF chains reach antennas and what each connection is built from.
///
/// `l_max` is the subarray budget per RF chain (AoSA) or the RF-chain budget per
/// subarray (DAoSA); it is ignored for fully connected networks. `n_subarrays == 0`
/// means one subarray per RF chain.
struct Architecture {
    Connectivity connectivity = Connectivity::FullyConnected;
    Element element = Element::UPS;
    int n_bits = 0;
    int l_max = 1;
    int n_subarrays = 0;

    int subarrays(int n_rf_tx) const { return n_subarrays > 0 ? n_subarrays : n_rf_tx; }
    int subarray_size(int n_tx, int n_rf_tx) const { return n_tx / subarrays(n_rf_tx); }
};

/// Throws ConfigError if `arch` cannot be built for an n_tx x n_rf_tx analog matrix.
void validate(const Architecture& arch, int n_tx, int n_rf_tx);

/// Parses labels of the form `<conn>-<elem>[:<l_max>]`, e.g. `fc-ups`, `fc-qps3`,
/// `daosa-dps:4`, `aosa-ups:1`. `sps` is accepted as an alias for `ups`.
Architecture parse_architecture(std::string_view text);

std::string connectivity_label(Connectivity c);
std::string element_label(const Architecture& arch);
/// Inverse of parse_architecture (l_max suffix only for subarray structures).
std::string architecture_label(const Architecture& arch);

}  // namespace hp
