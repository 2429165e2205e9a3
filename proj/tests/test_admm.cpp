#include <doctest.h>

#include <cmath>

#include "hybridprecoding/admm.hpp"
#include "hybridprecoding/linalg.hpp"
#include "hybridprecoding/projections.hpp"
#include "oracles.hpp"

using namespace hp;

using namespace hp::oracle;

TEST_CASE("parameter validation") {
    AdmmParams prm;
    CHECK_NOTHROW(validate(prm));
    prm.max_iters = 0;
    CHECK_THROWS_AS(validate(prm), ConfigError);
    prm = {};
    prm.rho = 0.0;
    CHECK_THROWS_AS(validate(prm), ConfigError);
    prm = {};
    prm.mu = -1.0;
    CHECK_THROWS_AS(validate(prm), ConfigError);
}

TEST_CASE("analytic Wirtinger gradients agree with finite differences of the ALF") {
    const AdmmParams prm;
    for (int f : {1, 4}) {
        auto in = mid_run(small(f), parse_architecture("fc-ups"), prm, 31 + f);
        // Move away from any stationary point so the comparison is meaningful.
        Rng rng(5);
        in.state.f_rf += 0.3 * gaussian(16, 4, rng);
        const CMatrix num = numeric_gradient(in.state, in.problem, prm, [](AdmmState& s) -> CMatrix& { return s.f_rf; }, 1e-6);
        const CMatrix ana = 2.0 * analytic_frf_gradient(in.state, in.problem, prm);
        CHECK((num - ana).norm() <= 1e-6 * ana.norm());
        const CMatrix numb = numeric_gradient(in.state, in.problem, prm, [](AdmmState& s) -> CMatrix& { return s.f_bb[0]; }, 1e-6);
        const CMatrix anab = 2.0 * analytic_fbb_gradient(in.state, in.problem, prm, 0);
        CHECK((numb - anab).norm() <= 1e-6 * anab.norm());
    }
}

TEST_CASE("update_frf and update_fbb are stationary points and never increase the ALF") {
    const AdmmParams prm;
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial)
        for (int f : {1, 4}) {
            const auto r = check_block_updates(mid_run(small(f), parse_architecture("fc-qps3"), prm, 100 + trial), prm, 100, rng);
            CHECK(r.frf_descent);
            CHECK(r.fbb_descent);
            CHECK(r.frf_stationarity <= 1e-6);
            CHECK(r.fbb_stationarity <= 1e-6);
            CHECK(r.perturbation_violations == 0);
        }
}

TEST_CASE("update_frf: a dominant penalty pulls F_RF to R - U") {
    Rng rng(3);
    AdmmProblem p;
    p.f_opt = {gaussian(8, 2, rng)};
    p.n_users = 2;
    AdmmState s;
    s.f_bb = {CMatrix::Identity(2, 2)};
    s.f_rf = CMatrix::Zero(8, 2);
    s.r = gaussian(8, 2, rng);
    s.u = gaussian(8, 2, rng);
    s.b = {CMatrix::Zero(8, 2)};
    s.w = s.b;
    s.f_approx = s.b;
    s.z = s.b;
    AdmmParams prm;
    prm.eta = prm.mu = 0.0;
    prm.rho = 1e12;
    CHECK((update_frf(s, p, prm) - (s.r - s.u)).norm() < 1e-9 * s.r.norm());
}

TEST_CASE("update_fbb: orthonormal F_RF gives the plain projection, and is linear in the targets") {
    Rng rng(4);
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(gaussian(8, 3, rng)).householderQ() * CMatrix::Identity(8, 3);
    AdmmProblem p;
    p.f_opt = {gaussian(8, 2, rng)};
    p.n_users = 2;
    AdmmState s;
    s.f_rf = q;
    s.b = {gaussian(8, 2, rng)};
    s.w = {gaussian(8, 2, rng)};
    s.f_approx = {gaussian(8, 2, rng)};
    s.z = {gaussian(8, 2, rng)};
    AdmmParams plain;
    plain.eta = plain.mu = 0.0;
    CHECK((update_fbb(s, p, plain)[0] - q.adjoint() * p.f_opt[0]).norm() < 1e-12);

    const AdmmParams prm;
    const CMatrix once = update_fbb(s, p, prm)[0];
    AdmmProblem p2 = p;
    p2.f_opt[0] *= 2.0;
    AdmmState s2 = s;
    for (auto* v : {&s2.b, &s2.w, &s2.f_approx, &s2.z}) (*v)[0] *= 2.0;
    CHECK((update_fbb(s2, p2, prm)[0] - 2.0 * once).norm() < 1e-12 * once.norm());
}

TEST_CASE("update_fbb: singular F_RF without ridge is a solver error") {
    Rng rng(5);
    AdmmProblem p;
    p.f_opt = {gaussian(8, 2, rng)};
    p.n_users = 2;
    AdmmState s;
    s.f_rf = gaussian(8, 3, rng);
    s.f_rf.col(2) = s.f_rf.col(0);
    s.b = s.w = s.f_approx = s.z = {CMatrix::Zero(8, 2)};
    AdmmParams prm;
    CHECK_THROWS_AS(update_fbb(s, p, prm), SolverError);
    prm.ridge = 1e-10;
    CHECK(update_fbb(s, p, prm)[0].allFinite());
}

TEST_CASE("power-ball projection") {
    Rng rng(6);
    const CMatrix y0 = gaussian(6, 3, rng);
    const CMatrix on = y0 * (2.0 / y0.norm());
    CHECK((project_power_ball(on, 4.0) - on).norm() < 1e-15);
    CHECK((project_power_ball(2.0 * on, 4.0) - on).norm() < 1e-15);
    for (int t = 0; t < 100; ++t) CHECK(std::abs(project_power_ball(gaussian(6, 3, rng), 4.0).squaredNorm() - 4.0) < 1e-12);
    bool degenerate = false;
    const CMatrix z = project_power_ball(CMatrix::Zero(6, 3), 4.0, &degenerate);
    CHECK(degenerate);
    CHECK(std::abs(z.squaredNorm() - 4.0) < 1e-12);
}

TEST_CASE("null-space projection: worked examples") {
    CMatrix h(1, 2);
    h << 1.0, 0.0;
    CMatrix a(2, 1);
    a << Complex(3.0, 1.0), Complex(-2.0, 5.0);
    const CMatrix x = project_nullspace(a, h);
    CHECK(x(0, 0) == Complex(0.0, 0.0));
    CHECK(x(1, 0) == a(1, 0));

    Rng rng(7);
    const CMatrix hb = gaussian(4, 8, rng);
    const CMatrix in_null = split_subspaces(hb).null_space * gaussian(4, 2, rng);
    CHECK((project_nullspace(in_null, hb) - in_null).norm() < 1e-12 * in_null.norm());
}

TEST_CASE("null-space projection: pseudo-inverse and SVD forms agree (200 pairs)") {
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        const CMatrix hb = gaussian(4, 8, rng);
        const CMatrix a = gaussian(8, 2, rng);
        const CMatrix x = project_nullspace(a, hb);
        const CMatrix pinv_form = pinv_nullspace(a, hb);
        CHECK((x - pinv_form).norm() <= 1e-9 * a.norm());
        CHECK((hb * x).norm() <= 1e-9 * x.norm());
        CHECK((project_nullspace(x, hb) - x).norm() <= 1e-12 * x.norm());
    }
}

TEST_CASE("null-space projection handles rank-deficient stacks") {
    Rng rng(9);
    CMatrix hb = gaussian(4, 8, rng);
    hb.row(3) = hb.row(0) + hb.row(1);
    const CMatrix a = gaussian(8, 2, rng);
    const CMatrix x = project_nullspace(a, hb);
    CHECK((hb * x).norm() <= 1e-9 * x.norm());
    CHECK(split_subspaces(hb).row_space.cols() == 3);
}

TEST_CASE("dual updates accumulate residuals") {
    Rng rng(10);
    AdmmState s;
    s.f_rf = gaussian(6, 2, rng);
    s.r = gaussian(6, 2, rng);
    s.f_bb = {gaussian(2, 3, rng)};
    s.b = {gaussian(6, 3, rng)};
    s.f_approx = {gaussian(6, 3, rng)};
    s.u = CMatrix::Zero(6, 2);
    s.w = s.z = {CMatrix::Zero(6, 3)};
    const CMatrix prod = s.f_rf * s.f_bb[0];
    update_duals(s);
    CHECK(s.u == s.f_rf - s.r);
    CHECK((s.w[0] - (prod - s.b[0])).norm() < 1e-14);
    update_duals(s);
    CHECK((s.u - 2.0 * (s.f_rf - s.r)).norm() < 1e-14);
    CHECK((s.z[0] - 2.0 * (prod - s.f_approx[0])).norm() < 1e-13);

    AdmmState fixed = s;
    fixed.r = fixed.f_rf;
    fixed.b = fixed.f_approx = {fixed.f_rf * fixed.f_bb[0]};
    const AdmmState before = fixed;
    update_duals(fixed);
    CHECK(fixed.u == before.u);
    CHECK(fixed.w[0] == before.w[0]);
    CHECK(fixed.z[0] == before.z[0]);
}

TEST_CASE("initialize: zero duals, feasible R, deterministic") {
    const SystemConfig cfg = small(2);
    Rng rng(11);
    const auto ch = sample_uncorrelated_channel(cfg, rng);
    const auto p = make_problem(bd_fully_digital_precoder(ch, cfg), ch, 1);
    for (const char* label : {"fc-ups", "fc-as", "daosa-switch:2", "aosa-qps2:1"}) {
        const Architecture a = parse_architecture(label);
        Rng r1(3), r2(3);
        const AdmmState s = initialize(p, a, 4, AdmmParams{}, r1);
        const AdmmState t = initialize(p, a, 4, AdmmParams{}, r2);
        CHECK(s.u.norm() == 0.0);
        for (int k = 0; k < 2; ++k) {
            CHECK(s.w[k].norm() == 0.0);
            CHECK(s.z[k].norm() == 0.0);
            CHECK(std::abs(s.b[k].squaredNorm() - 2.0) < 1e-12);
        }
        CHECK(is_member(s.r, a));
        CHECK(s.f_rf == t.f_rf);
        CHECK(s.f_bb[1] == t.f_bb[1]);
    }
}

TEST_CASE("iteration invariants hold after every step") {
    const SystemConfig cfg = small(4);
    const AdmmParams prm;
    for (const char* label : {"fc-ups", "fc-si", "daosa-dps:2"}) {
        const Architecture a = parse_architecture(label);
        auto in = mid_run(cfg, a, prm, 12);
        for (int t = 0; t < 5; ++t) {
            iterate(in.state, in.problem, a, prm);
            CHECK(is_member(in.state.r, a));
            for (int k = 0; k < 4; ++k) {
                CHECK(std::abs(in.state.b[k].squaredNorm() - 2.0) < 1e-12);
                for (int u = 0; u < 2; ++u) {
                    const auto x = user_block(in.state.f_approx[k], u, 1);
                    const CMatrix& v = in.problem.interference_rows[k][u];
                    CHECK((v.adjoint() * x).norm() <= 1e-9 * std::max(x.norm(), 1e-300));
                }
            }
        }
    }
}

TEST_CASE("finalize: exact least squares before rescaling, feasible output") {
    Rng rng(13);
    AdmmProblem p;
    p.n_users = 2;
    p.n_streams = 1;
    p.f_opt = {gaussian(16, 2, rng)};
    AdmmState s;
    s.r = project(gaussian(16, 4, rng), parse_architecture("fc-ups"));
    s.f_rf = s.r;
    CMatrix g = gaussian(4, 2, rng);
    g *= std::sqrt(2.0) / (s.r * g).norm();
    s.f_approx = {s.r * g};
    s.f_bb = {g};
    s.b = s.f_approx;
    const DesignResult d = finalize(s, p, AdmmParams{});
    CHECK((d.precoder.f_bb[0] - g).norm() < 1e-12);
    CHECK(d.precoder.f_rf == s.r);
    CHECK(!d.regularized_finalize);
}

TEST_CASE("design_hybrid: feasibility for every architecture") {
    const SystemConfig cfg = small(2);
    Rng rng(14);
    const auto ch = sample_uncorrelated_channel(cfg, rng);
    const auto f_opt = bd_fully_digital_precoder(ch, cfg);
    AdmmParams prm;
    prm.max_iters = 20;
    prm.ridge = 1e-10;
    for (const char* label : {"fc-ups", "fc-qps2", "fc-si", "fc-switch", "fc-as", "fc-dps", "aosa-ups:1",
                              "aosa-dps:2", "daosa-qps3:1", "daosa-ups:3"}) {
        INFO(label);
        const Architecture a = parse_architecture(label);
        Rng r(1);
        const DesignResult d = design_hybrid(f_opt, ch, cfg, a, prm, r);
        CHECK(is_member(d.precoder.f_rf, a));
        CHECK(d.trace.size() == 20u);
        for (const auto& f : d.precoder.effective()) CHECK(std::abs(f.squaredNorm() - 2.0) < 1e-10);
    }
}

TEST_CASE("design_hybrid: Q = 0 rejected, Q = 1 feasible") {
    const SystemConfig cfg = small(1);
    Rng rng(15);
    const auto ch = sample_uncorrelated_channel(cfg, rng);
    const auto f_opt = bd_fully_digital_precoder(ch, cfg);
    AdmmParams prm;
    prm.max_iters = 0;
    CHECK_THROWS_AS(design_hybrid(f_opt, ch, cfg, Architecture{}, prm, rng), ConfigError);
    prm.max_iters = 1;
    const auto d = design_hybrid(f_opt, ch, cfg, Architecture{}, prm, rng);
    CHECK(is_member(d.precoder.f_rf, Architecture{}));
    CHECK(std::abs(d.precoder.effective()[0].squaredNorm() - 2.0) < 1e-10);
}

TEST_CASE("design_hybrid: DPS approximates the target better than UPS") {
    SystemConfig cfg;  // desk dimensions
    int better = 0;
    const int n = 100;
    for (int t = 0; t < n; ++t) {
        Rng rng(1000 + t);
        const auto ch = sample(cfg, ChannelParams{}, rng);
        const auto f_opt = bd_fully_digital_precoder(ch, cfg);
        double err[2];
        int i = 0;
        for (const char* label : {"fc-dps", "fc-ups"}) {
            Rng r(t);
            const auto f = design_hybrid(f_opt, ch, cfg, parse_architecture(label), AdmmParams{}, r).precoder.effective();
            err[i++] = (f_opt.f_opt[0] - f[0]).norm() / f_opt.f_opt[0].norm();
        }
        better += err[0] < err[1];
    }
    CHECK(better >= 95);
}

TEST_CASE("mu = 0 matches an independent two-constraint ADMM step for step") {
    SystemConfig cfg;
    cfg.n_tx = 16;
    cfg.n_rx = 4;
    cfg.n_users = 1;
    cfg.n_streams = 2;
    cfg.n_rf_tx = 3;
    for (double eta : {0.0, 0.05}) {
        Rng rng(16);
        const auto ch = sample(cfg, ChannelParams{}, rng);
        const auto f_opt = bd_fully_digital_precoder(ch, cfg);
        const Architecture arch = parse_architecture("fc-ups");
        AdmmParams prm;
        prm.mu = 0.0;
        prm.eta = eta;
        prm.max_iters = 30;
        Rng r1(2), r2(2);
        const DesignResult d = design_hybrid(f_opt, ch, cfg, arch, prm, r1);

        // Reference: matrix-factorization ADMM with an analog set constraint and a power sphere.
        const CMatrix& fo = f_opt.f_opt[0];
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        CMatrix frf(16, 3);
        for (Eigen::Index j = 0; j < 3; ++j)
            for (Eigen::Index i = 0; i < 16; ++i) frf(i, j) = std::polar(1.0, phase(r2));
        CMatrix r = frf, u = CMatrix::Zero(16, 3);
        CMatrix fbb = (frf.adjoint() * frf).ldlt().solve(frf.adjoint() * fo);
        CMatrix b = frf * fbb;
        b *= std::sqrt(2.0) / b.norm();
        CMatrix w = CMatrix::Zero(16, 2);
        for (int t = 0; t < prm.max_iters; ++t) {
            const CMatrix tgt = fo + eta * (b - w);
            CMatrix lhs = (1.0 + eta) * fbb * fbb.adjoint();
            lhs.diagonal().array() += prm.rho;
            frf = (tgt * fbb.adjoint() + prm.rho * (r - u)) * lhs.inverse();
            fbb = (frf.adjoint() * frf).inverse() * frf.adjoint() * tgt / (1.0 + eta);
            r = (frf + u).unaryExpr([](const Complex& z) { return z / std::abs(z); });
            const CMatrix prod = frf * fbb;
            b = (prod + w) * (std::sqrt(2.0) / (prod + w).norm());
            u += frf - r;
            w += prod - b;
            const auto& got = d.trace[t];
            CHECK(got.objective == doctest::Approx((fo - prod).squaredNorm()).epsilon(1e-8));
            CHECK(got.analog_residual == doctest::Approx((frf - r).norm()).epsilon(1e-6));
        }
    }
}
