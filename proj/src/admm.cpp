#include "hybridprecoding/admm.hpp"

#include <cmath>
#include <numbers>

#include "hybridprecoding/linalg.hpp"
#include "hybridprecoding/projections.hpp"

namespace hp {

namespace {

constexpr double kSingularRcond = 1e-13;

// g^{-1} rhs for Hermitian positive semidefinite g. With `fallback` a singular g is
// regularized instead of rejected and `regularized` is raised.
CMatrix solve_hermitian(const CMatrix& g, const CMatrix& rhs, bool fallback, bool* regularized = nullptr,
                        const char* what = "normal equations") {
    Eigen::LDLT<CMatrix> ldlt(g);
    // rcond() skips exactly-zero pivots, so the pivot spread is checked as well.
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    const bool regular = ldlt.info() == Eigen::Success && pivots.size() > 0 &&
                         pivots.minCoeff() > kSingularRcond * pivots.maxCoeff() && ldlt.rcond() > kSingularRcond;
    if (regular) return ldlt.solve(rhs);
    if (!fallback)
        throw SolverError(std::string("singular ") + what + "; rerun with admm.ridge > 0 (e.g. 1e-10)");
    if (regularized) *regularized = true;
    const double scale = std::max(1.0, g.diagonal().real().cwiseAbs().maxCoeff());
    CMatrix reg = g;
    reg.diagonal().array() += 1e-10 * scale;
    return reg.ldlt().solve(rhs);
}

CMatrix normal_matrix(const CMatrix& f_rf, double ridge) {
    CMatrix g = f_rf.adjoint() * f_rf;
    if (ridge > 0.0) g.diagonal().array() += ridge;
    return g;
}

// F_opt,k + eta (B_k - W_k) + mu (F_approx,k - Z_k)
CMatrix target(const AdmmState& s, const AdmmProblem& p, const AdmmParams& prm, int k) {
    CMatrix t = p.f_opt[k];
    if (prm.eta != 0.0) t += prm.eta * (s.b[k] - s.w[k]);
    if (prm.mu != 0.0) t += prm.mu * (s.f_approx[k] - s.z[k]);
    return t;
}

CMatrix null_project_users(const CMatrix& a, const AdmmProblem& p, int k) {
    CMatrix x(a.rows(), a.cols());
    for (int u = 0; u < p.n_users; ++u)
        user_block(x, u, p.n_streams) = remove_subspace(user_block(a, u, p.n_streams), p.interference_rows[k][u]);
    return x;
}

}  // namespace

void validate(const AdmmParams& prm) {
    if (!(prm.rho > 0.0)) throw ConfigError("admm.rho must be > 0");
    if (!(prm.eta >= 0.0)) throw ConfigError("admm.eta must be >= 0");
    if (!(prm.mu >= 0.0)) throw ConfigError("admm.mu must be >= 0");
    if (prm.max_iters < 1) throw ConfigError("admm.max_iters must be >= 1");
    if (!(prm.ridge >= 0.0)) throw ConfigError("admm.ridge must be >= 0");
}

PerCarrier HybridPrecoder::effective() const {
    PerCarrier out;
    out.reserve(f_bb.size());
    for (const auto& bb : f_bb) out.push_back(f_rf * bb);
    return out;
}

AdmmProblem make_problem(const DigitalPrecoder& f_opt, const ChannelRealization& ch, int n_streams) {
    AdmmProblem p;
    p.f_opt = f_opt.f_opt;
    p.n_users = ch.n_users();
    p.n_streams = n_streams;
    p.interference_rows.assign(ch.n_carriers(), std::vector<CMatrix>(p.n_users));
    for (int k = 0; k < ch.n_carriers(); ++k)
        for (int u = 0; u < p.n_users; ++u)
            p.interference_rows[k][u] = split_subspaces(stacked_channel(ch, k, u)).row_space;
    return p;
}

CMatrix project_nullspace(const CMatrix& a, const CMatrix& h_bar) {
    return remove_subspace(a, split_subspaces(h_bar).row_space);
}

AdmmState initialize(const AdmmProblem& problem, const Architecture& arch, int n_rf_tx, const AdmmParams& prm,
                     Rng& rng) {
    const Eigen::Index n_tx = problem.f_opt.front().rows();
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    CMatrix seed(n_tx, n_rf_tx);
    for (Eigen::Index j = 0; j < seed.cols(); ++j)
        for (Eigen::Index i = 0; i < seed.rows(); ++i) seed(i, j) = std::polar(1.0, phase(rng));

    AdmmState s;
    s.f_rf = project(seed, arch);
    s.r = s.f_rf;
    s.u = CMatrix::Zero(n_tx, n_rf_tx);
    const CMatrix g = normal_matrix(s.f_rf, prm.ridge);
    for (int k = 0; k < problem.n_carriers(); ++k) {
        s.f_bb.push_back(solve_hermitian(g, s.f_rf.adjoint() * problem.f_opt[k], true));
        const CMatrix prod = s.f_rf * s.f_bb[k];
        s.b.push_back(project_power_ball(prod, problem.power_target()));
        s.f_approx.push_back(null_project_users(prod, problem, k));
        s.w.push_back(CMatrix::Zero(prod.rows(), prod.cols()));
        s.z.push_back(CMatrix::Zero(prod.rows(), prod.cols()));
    }
    return s;
}

CMatrix update_frf(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm) {
    const Eigen::Index n_rf = state.f_rf.cols();
    CMatrix rhs = prm.rho * (state.r - state.u);
    CMatrix gram = CMatrix::Zero(n_rf, n_rf);
    for (int k = 0; k < problem.n_carriers(); ++k) {
        rhs.noalias() += target(state, problem, prm, k) * state.f_bb[k].adjoint();
        gram.noalias() += state.f_bb[k] * state.f_bb[k].adjoint();
    }
    CMatrix g = (1.0 + prm.eta + prm.mu) * gram;
    g.diagonal().array() += prm.rho;
    // F_RF g = rhs with g Hermitian.
    return solve_hermitian(g, rhs.adjoint(), false, nullptr, "analog update").adjoint();
}

PerCarrier update_fbb(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm) {
    const CMatrix g = normal_matrix(state.f_rf, prm.ridge);
    const double scale = 1.0 / (1.0 + prm.eta + prm.mu);
    CMatrix rhs(state.f_rf.cols(), problem.f_opt.front().cols() * problem.n_carriers());
    const Eigen::Index width = problem.f_opt.front().cols();
    for (int k = 0; k < problem.n_carriers(); ++k)
        rhs.middleCols(k * width, width) = scale * (state.f_rf.adjoint() * target(state, problem, prm, k));
    const CMatrix sol = solve_hermitian(g, rhs, false, nullptr, "digital update (F_RF^H F_RF)");
    PerCarrier out;
    out.reserve(problem.n_carriers());
    for (int k = 0; k < problem.n_carriers(); ++k) out.push_back(sol.middleCols(k * width, width));
    return out;
}

void update_duals(AdmmState& state) {
    state.u += state.f_rf - state.r;
    for (std::size_t k = 0; k < state.f_bb.size(); ++k) {
        const CMatrix prod = state.f_rf * state.f_bb[k];
        state.w[k] += prod - state.b[k];
        state.z[k] += prod - state.f_approx[k];
    }
}

void iterate(AdmmState& state, const AdmmProblem& problem, const Architecture& arch, const AdmmParams& prm) {
    state.f_rf = update_frf(state, problem, prm);
    state.f_bb = update_fbb(state, problem, prm);
    state.r = project(state.f_rf + state.u, arch);
    for (int k = 0; k < problem.n_carriers(); ++k) {
        const CMatrix prod = state.f_rf * state.f_bb[k];
        state.b[k] = project_power_ball(prod + state.w[k], problem.power_target());
        // With mu = 0 the auxiliary never feeds back into F_RF or F_BB.
        if (prm.mu != 0.0) state.f_approx[k] = null_project_users(prod + state.z[k], problem, k);
    }
    update_duals(state);
}

DesignResult finalize(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm) {
    DesignResult out;
    out.precoder.f_rf = state.r;
    const CMatrix g = normal_matrix(state.r, prm.ridge);
    const double target_power = problem.power_target();
    for (int k = 0; k < problem.n_carriers(); ++k) {
        const CMatrix& fit_to = prm.mu != 0.0 ? state.f_approx[k]
                                : prm.eta != 0.0 ? state.b[k]
                                                 : CMatrix(state.f_rf * state.f_bb[k]);
        CMatrix bb = solve_hermitian(g, state.r.adjoint() * fit_to, true, &out.regularized_finalize);
        const double norm = (state.r * bb).norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw SolverError("finalize: hybrid precoder vanished on subcarrier " + std::to_string(k));
        bb *= std::sqrt(target_power) / norm;
        out.precoder.f_bb.push_back(std::move(bb));
    }
    return out;
}

double augmented_lagrangian(const AdmmState& s, const AdmmProblem& p, const AdmmParams& prm) {
    double value = prm.rho * ((s.f_rf - s.r + s.u).squaredNorm() - s.u.squaredNorm());
    for (int k = 0; k < p.n_carriers(); ++k) {
        const CMatrix prod = s.f_rf * s.f_bb[k];
        value += (p.f_opt[k] - prod).squaredNorm();
        value += prm.eta * ((prod - s.b[k] + s.w[k]).squaredNorm() - s.w[k].squaredNorm());
        value += prm.mu * ((prod - s.f_approx[k] + s.z[k]).squaredNorm() - s.z[k].squaredNorm());
    }
    return value;
}

IterationDiagnostics diagnose(const AdmmState& s, const AdmmProblem& p) {
    IterationDiagnostics d;
    d.analog_residual = (s.f_rf - s.r).norm();
    double power = 0.0, nulling = 0.0;
    for (int k = 0; k < p.n_carriers(); ++k) {
        const CMatrix prod = s.f_rf * s.f_bb[k];
        d.objective += (p.f_opt[k] - prod).squaredNorm();
        power += (prod - s.b[k]).squaredNorm();
        nulling += (prod - s.f_approx[k]).squaredNorm();
    }
    d.power_residual = std::sqrt(power);
    d.nulling_residual = std::sqrt(nulling);
    return d;
}

DesignResult design_hybrid(const AdmmProblem& problem, const Architecture& arch, int n_rf_tx, const AdmmParams& prm,
                           Rng& rng) {
    validate(prm);
    validate(arch, static_cast<int>(problem.f_opt.front().rows()), n_rf_tx);
    AdmmState state = initialize(problem, arch, n_rf_tx, prm, rng);
    std::vector<IterationDiagnostics> trace;
    trace.reserve(prm.max_iters);
    for (int t = 0; t < prm.max_iters; ++t) {
        iterate(state, problem, arch, prm);
        trace.push_back(diagnose(state, problem));
    }
    DesignResult out = finalize(state, problem, prm);
    out.trace = std::move(trace);
    return out;
}

DesignResult design_hybrid(const DigitalPrecoder& f_opt, const ChannelRealization& ch, const SystemConfig& cfg,
                           const Architecture& arch, const AdmmParams& prm, Rng& rng) {
    return design_hybrid(make_problem(f_opt, ch, cfg.n_streams), arch, cfg.n_rf_tx, prm, rng);
}

}  // namespace hp
