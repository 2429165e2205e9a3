#include "hybridprecoding/architecture.hpp"

#include <charconv>
#include <cmath>

namespace hp {

void validate(const Architecture& arch, int n_tx, int n_rf_tx) {
    if (arch.element == Element::QPS && (arch.n_bits < 1 || arch.n_bits > 16))
        throw ConfigError("architecture: QPS requires 1 <= n_bits <= 16");
    if (arch.element == Element::AntennaSelection) {
        if (arch.connectivity != Connectivity::FullyConnected)
            throw ConfigError("architecture: antenna selection is only defined for fully connected networks");
        if (n_rf_tx > n_tx) throw ConfigError("architecture: antenna selection requires n_rf_tx <= n_tx");
    }
    if (arch.connectivity == Connectivity::FullyConnected) return;

    const int n_sa = arch.subarrays(n_rf_tx);
    if (n_sa < 1 || n_tx % n_sa != 0)
        throw ConfigError("architecture: n_subarrays = " + std::to_string(n_sa) + " must divide n_tx = " +
                          std::to_string(n_tx));
    const int cap = arch.connectivity == Connectivity::AoSA ? n_sa : n_rf_tx;
    if (arch.l_max < 1 || arch.l_max > cap)
        throw ConfigError("architecture: l_max = " + std::to_string(arch.l_max) + " must lie in [1, " +
                          std::to_string(cap) + "]");
    if (arch.connectivity == Connectivity::DAoSA && n_sa * arch.l_max < n_rf_tx)
        throw ConfigError("architecture: DAoSA needs n_subarrays * l_max >= n_rf_tx so every RF chain "
                          "reaches at least one subarray");
}

namespace {

Element parse_element(std::string_view s, int& bits) {
    bits = 0;
    if (s == "ups" || s == "sps") return Element::UPS;
    if (s == "si") return Element::SI;
    if (s == "switch" || s == "swi") return Element::Switch;
    if (s == "as") return Element::AntennaSelection;
    if (s == "dps") return Element::DPS;
    if (s.starts_with("qps")) {
        auto digits = s.substr(3);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bits);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
            throw ConfigError("architecture: malformed QPS bit count in '" + std::string(s) + "'");
        return Element::QPS;
    }
    throw ConfigError("architecture: unknown element '" + std::string(s) + "'");
}

}  // namespace

Architecture parse_architecture(std::string_view text) {
    Architecture arch;
    auto dash = text.find('-');
    if (dash == std::string_view::npos)
        throw ConfigError("architecture: expected <conn>-<elem>[:l_max], got '" + std::string(text) + "'");
    auto conn = text.substr(0, dash);
    auto rest = text.substr(dash + 1);
    auto colon = rest.find(':');
    auto elem = rest.substr(0, colon);

    if (conn == "fc")
        arch.connectivity = Connectivity::FullyConnected;
    else if (conn == "aosa")
        arch.connectivity = Connectivity::AoSA;
    else if (conn == "daosa")
        arch.connectivity = Connectivity::DAoSA;
    else
        throw ConfigError("architecture: unknown connectivity '" + std::string(conn) + "'");

    arch.element = parse_element(elem, arch.n_bits);

    if (colon != std::string_view::npos) {
        auto digits = rest.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arch.l_max);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
            throw ConfigError("architecture: malformed l_max in '" + std::string(text) + "'");
    }
    return arch;
}

std::string connectivity_label(Connectivity c) {
    switch (c) {
        case Connectivity::FullyConnected: return "fc";
        case Connectivity::AoSA: return "aosa";
        case Connectivity::DAoSA: return "daosa";
    }
    return "?";
}

std::string element_label(const Architecture& arch) {
    switch (arch.element) {
        case Element::UPS: return "ups";
        case Element::QPS: return "qps" + std::to_string(arch.n_bits);
        case Element::SI: return "si";
        case Element::Switch: return "switch";
        case Element::AntennaSelection: return "as";
        case Element::DPS: return "dps";
    }
    return "?";
}

std::string architecture_label(const Architecture& arch) {
    std::string s = connectivity_label(arch.connectivity) + "-" + element_label(arch);
    if (arch.connectivity != Connectivity::FullyConnected) s += ":" + std::to_string(arch.l_max);
    return s;
}

}  // namespace hp
