// Independent reference computations shared by the unit tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hybridprecoding/admm.hpp"
#include "hybridprecoding/projections.hpp"

namespace hp::oracle {

inline CMatrix gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix x(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) x(i, j) = Complex(n(rng), n(rng));
    return x;
}

// Gaussian matrix with a random overall scale in [0, 3).
inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::uniform_real_distribution<double> scale(0.0, 3.0);
    const double s = scale(rng);
    return s * gaussian(rows, cols, rng);
}

// Every element technology composed with every connectivity for 16 antennas, 4 RF chains.
inline std::vector<Architecture> all_architectures() {
    std::vector<std::string> labels = {"fc-ups", "fc-qps1", "fc-qps2", "fc-qps3", "fc-si", "fc-switch", "fc-as",
                                       "fc-dps"};
    for (const char* e : {"ups", "qps2", "si", "switch", "dps"}) {
        for (int l : {1, 2, 4}) labels.push_back(std::string("aosa-") + e + ":" + std::to_string(l));
        for (int l : {1, 2, 3, 4}) labels.push_back(std::string("daosa-") + e + ":" + std::to_string(l));
    }
    std::vector<Architecture> out;
    for (const auto& l : labels) out.push_back(parse_architecture(l));
    return out;
}

inline std::vector<Complex> candidates(Element e, int bits) {
    switch (e) {
        case Element::QPS: {
            std::vector<Complex> c;
            for (int k = 0; k < (1 << bits); ++k)
                c.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / (1 << bits)));
            return c;
        }
        case Element::SI: return {1.0, -1.0};
        case Element::Switch: return {1.0, 0.0};
        default: return {};
    }
}

// Number of draws where project_element is farther than the nearest enumerated candidate.
inline long brute_force_mismatches(Element e, int bits, int draws, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.5);
    const auto cand = candidates(e, bits);
    long mismatches = 0;
    for (int t = 0; t < draws; ++t) {
        const Complex x(n(rng), n(rng));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : cand) best = std::min(best, std::abs(x - v));
        if (std::abs(x - project_element(x, e, bits)) > best + 1e-12) ++mismatches;
    }
    return mismatches;
}

// X = A - H^H (H H^H)^{-1} H A for full-row-rank H.
inline CMatrix pinv_nullspace(const CMatrix& a, const CMatrix& h_bar) {
    const CMatrix gram = h_bar * h_bar.adjoint();
    return a - h_bar.adjoint() * gram.llt().solve(h_bar * a);
}

inline SystemConfig small(int n_carriers) {
    SystemConfig cfg;
    cfg.n_tx = 16;
    cfg.n_rx = 2;
    cfg.n_users = 2;
    cfg.n_streams = 1;
    cfg.n_rf_tx = 4;
    cfg.n_carriers = n_carriers;
    cfg.bandwidth = n_carriers > 1 ? 1e9 : 0.0;
    return cfg;
}

struct Instance {
    AdmmProblem problem;
    AdmmState state;
};

// A mid-run state: a few iterations in, all duals nonzero.
inline Instance mid_run(const SystemConfig& cfg, const Architecture& arch, const AdmmParams& prm,
                        std::uint64_t seed) {
    Rng rng(seed);
    ChannelParams prm_ch;
    prm_ch.mode = ChannelMode::Uncorrelated;  // n_rx = 2 has no square array geometry
    const auto ch = sample(cfg, prm_ch, rng);
    Instance in{make_problem(bd_fully_digital_precoder(ch, cfg), ch, cfg.n_streams), {}};
    in.state = initialize(in.problem, arch, cfg.n_rf_tx, prm, rng);
    for (int t = 0; t < 3; ++t) iterate(in.state, in.problem, arch, prm);
    return in;
}

// Central-difference gradient of the ALF with respect to one block, as a complex
// matrix holding (dL/dRe, dL/dIm) in (real, imag).
template <typename Access>
CMatrix numeric_gradient(AdmmState s, const AdmmProblem& p, const AdmmParams& prm, Access block, double h) {
    CMatrix& x = block(s);
    CMatrix g(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const Complex keep = x(i, j);
            double parts[2];
            for (int part = 0; part < 2; ++part) {
                const Complex step = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
                x(i, j) = keep + step;
                const double up = augmented_lagrangian(s, p, prm);
                x(i, j) = keep - step;
                const double down = augmented_lagrangian(s, p, prm);
                parts[part] = (up - down) / (2.0 * h);
                x(i, j) = keep;
            }
            g(i, j) = Complex(parts[0], parts[1]);
        }
    return g;
}

// Residual F_opt - F_RF F_BB pulled back through the penalty terms.
inline CMatrix penalty_residual(const AdmmState& s, const AdmmProblem& p, const AdmmParams& prm, int k) {
    const CMatrix prod = s.f_rf * s.f_bb[k];
    return -(p.f_opt[k] - prod) + prm.eta * (prod - s.b[k] + s.w[k]) + prm.mu * (prod - s.f_approx[k] + s.z[k]);
}

// Wirtinger gradient dL/dF_RF^* from the scaled ALF, written out term by term.
inline CMatrix analytic_frf_gradient(const AdmmState& s, const AdmmProblem& p, const AdmmParams& prm) {
    CMatrix g = prm.rho * (s.f_rf - s.r + s.u);
    for (int k = 0; k < p.n_carriers(); ++k) g += penalty_residual(s, p, prm, k) * s.f_bb[k].adjoint();
    return g;
}

inline CMatrix analytic_fbb_gradient(const AdmmState& s, const AdmmProblem& p, const AdmmParams& prm, int k) {
    return s.f_rf.adjoint() * penalty_residual(s, p, prm, k);
}

struct BlockReport {
    double frf_stationarity = 0.0;  // |numeric gradient| / scale after update_frf
    double fbb_stationarity = 0.0;  // worst subcarrier after update_fbb
    bool frf_descent = true;        // ALF did not increase over the block
    bool fbb_descent = true;
    int perturbation_violations = 0;
};

// Applies update_frf then update_fbb to `in` and checks each against the ALF directly.
inline BlockReport check_block_updates(const Instance& in, const AdmmParams& prm, int n_perturb, Rng& rng) {
    BlockReport r;
    AdmmState s = in.state;
    const AdmmProblem& p = in.problem;
    const double before = augmented_lagrangian(s, p, prm);
    const double frf_scale = std::max(1.0, analytic_frf_gradient(s, p, prm).norm());
    s.f_rf = update_frf(s, p, prm);
    const double mid = augmented_lagrangian(s, p, prm);
    r.frf_descent = mid <= before + 1e-12 * std::abs(before);
    r.frf_stationarity =
        numeric_gradient(s, p, prm, [](AdmmState& x) -> CMatrix& { return x.f_rf; }, 1e-6).norm() / frf_scale;
    for (int i = 0; i < n_perturb; ++i) {
        AdmmState q = s;
        q.f_rf += 1e-3 * gaussian(q.f_rf.rows(), q.f_rf.cols(), rng);
        r.perturbation_violations += augmented_lagrangian(q, p, prm) < mid - 1e-9 * std::abs(mid);
    }

    s.f_bb = update_fbb(s, p, prm);
    const double after = augmented_lagrangian(s, p, prm);
    r.fbb_descent = after <= mid + 1e-12 * std::abs(mid);
    for (int k = 0; k < p.n_carriers(); ++k) {
        const double scale = std::max(1.0, s.f_rf.norm() * p.f_opt[k].norm());
        const CMatrix g = numeric_gradient(s, p, prm, [k](AdmmState& x) -> CMatrix& { return x.f_bb[k]; }, 1e-6);
        r.fbb_stationarity = std::max(r.fbb_stationarity, g.norm() / scale);
    }
    for (int i = 0; i < n_perturb; ++i) {
        AdmmState q = s;
        for (auto& bb : q.f_bb) bb += 1e-3 * gaussian(bb.rows(), bb.cols(), rng);
        r.perturbation_violations += augmented_lagrangian(q, p, prm) < after - 1e-9 * std::abs(after);
    }
    return r;
}

}  // namespace hp::oracle
