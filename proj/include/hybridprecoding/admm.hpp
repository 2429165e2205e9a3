#pragma once

#include <span>

#include "hybridprecoding/architecture.hpp"
#include "hybridprecoding/baseline.hpp"
#include "hybridprecoding/channel.hpp"
#include "hybridprecoding/types.hpp"

namespace hp {

/// Penalties of the augmented Lagrangian and iteration budget.
///
/// rho couples F_RF to the analog set, eta couples F_RF F_BB,k to the power sphere,
/// mu couples each user's block to the null space of the other users' channels.
/// mu = 0 removes interference nulling altogether (plain matrix approximation).
struct AdmmParams {
    double rho = 0.05;
    double eta = 0.05;
    double mu = 1.0;
    int max_iters = 100;
    double ridge = 0.0;
};

void validate(const AdmmParams& prm);

struct HybridPrecoder {
    CMatrix f_rf;     // n_tx x n_rf_tx, in C(arch)
    PerCarrier f_bb;  // per k, n_rf_tx x (n_users * n_streams)

    /// F_RF F_BB,k for every subcarrier.
    PerCarrier effective() const;
};

/// Fixed inputs of one design run: the target precoder and, per (k, u), an
/// orthonormal basis of the row space of the other users' stacked channel.
struct AdmmProblem {
    PerCarrier f_opt;
    PerCarrierUser interference_rows;  // [k][u], n_tx x rank
    int n_users = 1;
    int n_streams = 1;

    double power_target() const { return static_cast<double>(n_users) * n_streams; }
    int n_carriers() const { return static_cast<int>(f_opt.size()); }
};

AdmmProblem make_problem(const DigitalPrecoder& f_opt, const ChannelRealization& ch, int n_streams);

/// Primal blocks and scaled duals (U = Lambda / rho, W_k = Psi_k / eta, Z_k = Gamma_k / mu).
struct AdmmState {
    CMatrix f_rf;
    PerCarrier f_bb;
    CMatrix r;
    PerCarrier b;
    PerCarrier f_approx;
    CMatrix u;
    PerCarrier w;
    PerCarrier z;
};

struct IterationDiagnostics {
    double objective = 0.0;         // sum_k ||F_opt,k - F_RF F_BB,k||_F^2
    double analog_residual = 0.0;   // ||F_RF - R||_F
    double power_residual = 0.0;    // sqrt(sum_k ||F_RF F_BB,k - B_k||_F^2)
    double nulling_residual = 0.0;  // sqrt(sum_k ||F_RF F_BB,k - F_approx,k||_F^2)
};

struct DesignResult {
    HybridPrecoder precoder;
    std::vector<IterationDiagnostics> trace;
    bool regularized_finalize = false;  // finalize fell back to a ridge solve
};

AdmmState initialize(const AdmmProblem& problem, const Architecture& arch, int n_rf_tx, const AdmmParams& prm,
                     Rng& rng);

/// Exact minimizer of the augmented Lagrangian over F_RF with every other block fixed.
CMatrix update_frf(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm);

/// Exact minimizer over F_BB,k (all k) for the current F_RF.
PerCarrier update_fbb(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm);

/// Columns of `a` with their component in span(interference_rows) removed.
CMatrix project_nullspace(const CMatrix& a, const CMatrix& h_bar);

/// Scaled dual ascent; the current primal iterates define the residuals.
void update_duals(AdmmState& state);

/// One pass over the update sequence (analog, digital, R, B_k, F_approx,k, duals).
void iterate(AdmmState& state, const AdmmProblem& problem, const Architecture& arch, const AdmmParams& prm);

/// R becomes the analog precoder; F_BB,k is the least-squares fit to the
/// nulling auxiliary (or to B_k when mu = 0, or to F_RF F_BB,k when eta = mu = 0),
/// rescaled so ||F_RF F_BB,k||_F^2 = n_users * n_streams.
DesignResult finalize(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm);

/// Augmented Lagrangian in scaled form, without the indicator terms.
double augmented_lagrangian(const AdmmState& state, const AdmmProblem& problem, const AdmmParams& prm);

IterationDiagnostics diagnose(const AdmmState& state, const AdmmProblem& problem);

/// Full design: initialize, max_iters iterations, finalize.
DesignResult design_hybrid(const AdmmProblem& problem, const Architecture& arch, int n_rf_tx, const AdmmParams& prm,
                           Rng& rng);

DesignResult design_hybrid(const DigitalPrecoder& f_opt, const ChannelRealization& ch, const SystemConfig& cfg,
                           const Architecture& arch, const AdmmParams& prm, Rng& rng);

}  // namespace hp
