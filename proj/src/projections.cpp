#include "hybridprecoding/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace hp {

namespace {

constexpr double kPi = std::numbers::pi;
// Modulus slack that keeps unit-modulus and |x| <= 2 projections exactly idempotent.
constexpr double kModulusSlack = 8.0 * std::numeric_limits<double>::epsilon();

Complex qps_point(int k, int levels) {
    if (k == 0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * kPi * k / levels);
}

int qps_index(Complex x, int levels) {
    const double step = 2.0 * kPi / levels;
    const long k = std::lround(std::arg(x) / step);
    return static_cast<int>(((k % levels) + levels) % levels);
}

bool element_has_zero(Element e) { return e == Element::Switch || e == Element::DPS; }

bool in_element_set(Complex x, Element element, int n_bits) {
    switch (element) {
        case Element::UPS: return std::abs(std::abs(x) - 1.0) <= kModulusSlack;
        case Element::QPS: {
            const int levels = 1 << n_bits;
            return x == qps_point(qps_index(x, levels), levels);
        }
        case Element::SI: return x == Complex(1.0, 0.0) || x == Complex(-1.0, 0.0);
        case Element::Switch:
        case Element::AntennaSelection: return x == Complex(1.0, 0.0) || x == Complex(0.0, 0.0);
        case Element::DPS: return std::abs(x) <= 2.0 * (1.0 + kModulusSlack);
    }
    return false;
}

// Row ranges of subarray s.
struct Blocks {
    int count;
    int size;
    Eigen::Index start(int s) const { return static_cast<Eigen::Index>(s) * size; }
};

Blocks blocks_of(const CMatrix& x, const Architecture& arch) {
    const int n_tx = static_cast<int>(x.rows());
    const int n_rf = static_cast<int>(x.cols());
    validate(arch, n_tx, n_rf);
    const int n_sa = arch.subarrays(n_rf);
    return {n_sa, n_tx / n_sa};
}

// Indices 0..n-1 ordered by descending score; equal scores keep ascending index.
std::vector<int> ranked(const std::vector<double>& score) {
    std::vector<int> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
    return order;
}

void fill_block(CMatrix& out, const CMatrix& x, const Blocks& b, int s, Eigen::Index col, const Architecture& arch) {
    for (Eigen::Index i = b.start(s); i < b.start(s) + b.size; ++i)
        out(i, col) = project_element(x(i, col), arch.element, arch.n_bits);
}

}  // namespace

Complex project_element(Complex x, Element element, int n_bits) {
    switch (element) {
        case Element::UPS: {
            const double m = std::abs(x);
            if (m == 0.0) return {1.0, 0.0};
            if (std::abs(m - 1.0) <= kModulusSlack) return x;
            return x / m;
        }
        case Element::QPS: {
            const int levels = 1 << n_bits;
            return qps_point(qps_index(x, levels), levels);
        }
        case Element::SI: return x.real() >= 0.0 ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
        case Element::Switch: return x.real() >= 0.5 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        case Element::DPS: {
            const double m = std::abs(x);
            if (m <= 2.0 * (1.0 + kModulusSlack)) return x;
            return x * (2.0 / m);
        }
        case Element::AntennaSelection: break;
    }
    throw ConfigError("project_element: antenna selection is not an entrywise projection");
}

CMatrix project_elementwise(const CMatrix& x, const Architecture& arch) {
    if (arch.element == Element::AntennaSelection)
        throw ConfigError("project_elementwise: antenna selection is not an entrywise projection");
    return x.unaryExpr([&](const Complex& v) { return project_element(v, arch.element, arch.n_bits); });
}

RMatrix project_antenna_selection(const CMatrix& x) {
    const Eigen::Index rows = x.rows();
    const Eigen::Index cols = x.cols();
    if (cols > rows) throw ConfigError("project_antenna_selection: more RF chains than antennas");

    const RMatrix re = x.real();
    std::vector<double> best(cols);
    for (Eigen::Index j = 0; j < cols; ++j) best[j] = re.col(j).maxCoeff();

    RMatrix out = RMatrix::Zero(rows, cols);
    std::vector<bool> claimed(rows, false);
    for (int j : ranked(best)) {
        Eigen::Index pick = -1;
        for (Eigen::Index i = 0; i < rows; ++i)
            if (!claimed[i] && (pick < 0 || re(i, j) > re(pick, j))) pick = i;
        claimed[pick] = true;
        out(pick, j) = 1.0;
    }
    return out;
}

CMatrix project_aosa(const CMatrix& x, const Architecture& arch) {
    const Blocks b = blocks_of(x, arch);
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    std::vector<double> l1(b.count);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (int s = 0; s < b.count; ++s) l1[s] = x.col(j).segment(b.start(s), b.size).cwiseAbs().sum();
        const auto order = ranked(l1);
        for (int r = 0; r < arch.l_max; ++r) fill_block(out, x, b, order[r], j, arch);
    }
    return out;
}

CMatrix project_daosa(const CMatrix& x, const Architecture& arch) {
    const Blocks b = blocks_of(x, arch);
    const int n_rf = static_cast<int>(x.cols());
    const int keep = std::min(arch.l_max, n_rf);

    // energy(s, j): squared norm of column j restricted to subarray s.
    RMatrix energy(b.count, n_rf);
    for (int s = 0; s < b.count; ++s)
        for (int j = 0; j < n_rf; ++j) energy(s, j) = x.col(j).segment(b.start(s), b.size).squaredNorm();

    std::vector<std::vector<bool>> active(b.count, std::vector<bool>(n_rf, false));
    std::vector<int> coverage(n_rf, 0);
    std::vector<double> score(n_rf);
    for (int s = 0; s < b.count; ++s) {
        for (int j = 0; j < n_rf; ++j) score[j] = energy(s, j);
        const auto order = ranked(score);
        for (int r = 0; r < keep; ++r) {
            active[s][order[r]] = true;
            ++coverage[order[r]];
        }
    }

    // Every RF chain must keep one subarray. Move the cheapest slot whose owner is
    // covered elsewhere; validate() guarantees such a slot exists.
    for (int j = 0; j < n_rf; ++j) {
        if (coverage[j] > 0) continue;
        // A zero column is representable by any assignment when the element set holds 0.
        if (element_has_zero(arch.element) && energy.col(j).maxCoeff() == 0.0) continue;
        int best_s = -1, best_c = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < b.count; ++s)
            for (int c = 0; c < n_rf; ++c) {
                if (!active[s][c] || coverage[c] < 2) continue;
                const double gain = energy(s, j) - energy(s, c);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_s = s;
                    best_c = c;
                }
            }
        if (best_s < 0) throw ConfigError("project_daosa: no subarray can be reassigned");
        active[best_s][best_c] = false;
        --coverage[best_c];
        active[best_s][j] = true;
        ++coverage[j];
    }

    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (int s = 0; s < b.count; ++s)
        for (int j = 0; j < n_rf; ++j)
            if (active[s][j]) fill_block(out, x, b, s, j, arch);
    return out;
}

CMatrix project(const CMatrix& x, const Architecture& arch) {
    switch (arch.connectivity) {
        case Connectivity::FullyConnected:
            if (arch.element == Element::AntennaSelection) return project_antenna_selection(x).cast<Complex>();
            validate(arch, static_cast<int>(x.rows()), static_cast<int>(x.cols()));
            return project_elementwise(x, arch);
        case Connectivity::AoSA: return project_aosa(x, arch);
        case Connectivity::DAoSA: return project_daosa(x, arch);
    }
    return x;
}

bool is_member(const CMatrix& x, const Architecture& arch) {
    const Eigen::Index rows = x.rows();
    const Eigen::Index cols = x.cols();

    if (arch.element == Element::AntennaSelection) {
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                if (!in_element_set(x(i, j), Element::AntennaSelection, 0)) return false;
        const RMatrix re = x.real();
        return (re.colwise().sum().array() == 1.0).all() && (re.rowwise().sum().array() <= 1.0).all();
    }

    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            if (x(i, j) != Complex(0.0, 0.0) && !in_element_set(x(i, j), arch.element, arch.n_bits)) return false;

    if (arch.connectivity == Connectivity::FullyConnected) {
        if (element_has_zero(arch.element)) return true;
        return (x.array() != Complex(0.0, 0.0)).all();
    }

    const int n_rf = static_cast<int>(cols);
    const int n_sa = arch.subarrays(n_rf);
    if (rows % n_sa != 0) return false;
    const Blocks b{n_sa, static_cast<int>(rows / n_sa)};

    // nonzero(s, j): block carries any nonzero entry. Blocks are all-or-nothing
    // unless the element set itself contains zero.
    std::vector<std::vector<bool>> nonzero(n_sa, std::vector<bool>(n_rf));
    for (int s = 0; s < n_sa; ++s)
        for (int j = 0; j < n_rf; ++j) {
            auto seg = x.col(j).segment(b.start(s), b.size);
            const auto nz = (seg.array() != Complex(0.0, 0.0)).count();
            if (!element_has_zero(arch.element) && nz != 0 && nz != b.size) return false;
            nonzero[s][j] = nz > 0;
        }

    if (arch.connectivity == Connectivity::AoSA) {
        for (int j = 0; j < n_rf; ++j) {
            int used = 0;
            for (int s = 0; s < n_sa; ++s) used += nonzero[s][j];
            if (used > arch.l_max) return false;
            if (used == 0 && !element_has_zero(arch.element)) return false;
        }
        return true;
    }

    for (int s = 0; s < n_sa; ++s) {
        int used = 0;
        for (int j = 0; j < n_rf; ++j) used += nonzero[s][j];
        if (used > arch.l_max) return false;
    }
    if (!element_has_zero(arch.element))
        for (int j = 0; j < n_rf; ++j) {
            bool any = false;
            for (int s = 0; s < n_sa; ++s) any = any || nonzero[s][j];
            if (!any) return false;
        }
    return true;
}

}  // namespace hp
