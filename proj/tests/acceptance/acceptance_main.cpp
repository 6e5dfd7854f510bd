// Acceptance suite: one pass/fail line per criterion. Exit code is the number
// of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "slskit/cli.hpp"
#include "slskit/controllers.hpp"
#include "slskit/io.hpp"
#include "slskit/iop.hpp"
#include "slskit/noise.hpp"
#include "slskit/simulator.hpp"
#include "slskit/sls.hpp"
#include "support/oracles.hpp"

using namespace slskit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
    template <typename T>
    void note(const std::string& key, T value) {
        detail << ' ' << key << '=' << value;
    }
};

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::shared_ptr<ObjectiveModule>> chain_h2(const LTISystem& sys) {
    return {std::make_shared<H2Objective>(sys.C1(), sys.D12())};
}

std::vector<std::shared_ptr<ObjectiveModule>> lqg_modules(const LTISystem& sys, double wp,
                                                          double wm) {
    const SystemDims d = sys.dims();
    Matrix Wp = Matrix::Zero(d.nx, d.nx + d.ny);
    Wp.leftCols(d.nx) = wp * Matrix::Identity(d.nx, d.nx);
    Matrix Wm = Matrix::Zero(d.ny, d.nx + d.ny);
    Wm.rightCols(d.ny) = wm * Matrix::Identity(d.ny, d.ny);
    return {std::make_shared<LqgObjective>(sys.C1(), sys.D12(), Wp, Wm)};
}

Vector chain_impulse(int n, double mag) {
    Vector v = Vector::Zero(n);
    v(chain_center_node(n)) = mag;
    return v;
}

void check_certificate(Check& c, const QpSolveInfo& info, const std::string& who) {
    c.require(info.primal_residual <= 1e-9, who + " primal residual " +
                                                std::to_string(info.primal_residual));
    c.require(info.stationarity_residual <= 1e-7,
              who + " stationarity residual " + std::to_string(info.stationarity_residual));
}

fs::path suite_dir() {
    const fs::path dir = fs::temp_directory_path() / "slskit-acceptance";
    fs::create_directories(dir);
    return dir;
}

// Per-signal convolution of an FIR map with a recorded noise history.
Vector convolve_history(const FirTransferMatrix& map, const Signal& w, int t) {
    Vector out = Vector::Zero(map.rows());
    for (int tau = map.start(); tau <= std::min(t, map.horizon()); ++tau) {
        out += map.coeff(tau) * w[t - tau];
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_1(Check& c) {
    const auto t0 = Clock::now();
    LTISystem sys = make_chain(10);
    const double rho = spectral_radius(sys.A());
    const double dt = elapsed(t0);
    c.note("rho", rho);
    c.note("seconds", dt);
    c.require(std::abs(rho - 0.5) <= 1e-3, "spectral radius outside 0.5 +/- 1e-3");
    c.require(dt < 1.0, "runtime above 1 s");
}

void criterion_2(Check& c) {
    {
        const auto t0 = Clock::now();
        LTISystem sys = make_chain(10);
        const auto r = SlsStateFeedbackSynthesis(20, chain_h2(sys)).synthesize_full(sys);
        const double dt = elapsed(t0);
        const double resid = oracle::sf_product_residual(sys.A(), sys.B2(), r.params.phi_x,
                                                         r.params.phi_u, 41);
        c.note("sf_residual", resid);
        c.note("sf_seconds", dt);
        c.require(resid <= 1e-8, "state-feedback product residual above 1e-8");
        c.require(dt < 30.0, "state-feedback runtime above 30 s");
    }
    {
        const auto t0 = Clock::now();
        LTISystem sys = make_chain_measured(10, 0.1);
        const auto r =
            SlsOutputFeedbackSynthesis(20, lqg_modules(sys, 0.02, 0.1)).synthesize_full(sys);
        const double dt = elapsed(t0);
        const double resid =
            oracle::of_product_residual(sys.A(), sys.B2(), sys.C2(), r.params.phi_xx,
                                        r.params.phi_ux, r.params.phi_xy, r.params.phi_uy, 41);
        c.note("of_residual", resid);
        c.note("of_seconds", dt);
        c.require(resid <= 1e-8, "output-feedback product residual above 1e-8");
        c.require(dt < 30.0, "output-feedback runtime above 30 s");
    }
}

void criterion_3(Check& c) {
    const int T = 20, horizon = 30;
    double worst = 0.0;

    {  // state feedback
        LTISystem sys = make_chain(10);
        const auto r = SlsStateFeedbackSynthesis(T, chain_h2(sys)).synthesize_full(sys);
        SfSlsController ctrl(r.params);
        for (int trial = 0; trial < 10; ++trial) {
            GaussianNoise noise(Matrix::Identity(10, 10), 1000 + trial);
            const SimulationResult sim = run_simulation(sys, ctrl, noise, horizon);
            for (int t = 0; t < horizon; ++t) {
                worst = std::max(
                    worst,
                    (sim.x[t] - convolve_history(r.params.phi_x, sim.w, t)).cwiseAbs().maxCoeff());
                worst = std::max(
                    worst,
                    (sim.u[t] - convolve_history(r.params.phi_u, sim.w, t)).cwiseAbs().maxCoeff());
            }
        }
        c.note("sf_map_error", worst);
    }

    {  // output feedback
        LTISystem sys = make_chain_measured(10, 0.1);
        const auto r =
            SlsOutputFeedbackSynthesis(T, lqg_modules(sys, 0.02, 0.1)).synthesize_full(sys);
        OfSlsController ctrl(r.params, sys.D22());
        FirTransferMatrix xmap(10, 20, 1, T), umap(10, 20, 0, T);
        umap.at(0) = r.params.phi_uy.at(0) * sys.D21();
        for (int tau = 1; tau <= T; ++tau) {
            xmap.at(tau) = r.params.phi_xx.at(tau) * sys.B1() + r.params.phi_xy.at(tau) * sys.D21();
            umap.at(tau) = r.params.phi_ux.at(tau) * sys.B1() + r.params.phi_uy.at(tau) * sys.D21();
        }
        double of_worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            GaussianNoise noise(Matrix::Identity(20, 20), 2000 + trial);
            const SimulationResult sim = run_simulation(sys, ctrl, noise, horizon);
            for (int t = 0; t < horizon; ++t) {
                of_worst = std::max(
                    of_worst, (sim.x[t] - convolve_history(xmap, sim.w, t)).cwiseAbs().maxCoeff());
                of_worst = std::max(
                    of_worst, (sim.u[t] - convolve_history(umap, sim.w, t)).cwiseAbs().maxCoeff());
            }
        }
        c.note("of_map_error", of_worst);
        worst = std::max(worst, of_worst);
    }

    {  // iop
        LTISystem sys = make_chain(10);
        const auto r = synthesize_iop(sys, T);
        FirFeedbackController ctrl(r.params.X, r.params.Y);
        const PlantTransfers plant = plant_transfers(sys, 2 * T);
        const FirTransferMatrix ymap = fir::multiply(r.params.X, plant.Pyw, horizon);
        const FirTransferMatrix umap = fir::multiply(r.params.Y, plant.Pyw, horizon);
        double iop_worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            GaussianNoise noise(Matrix::Identity(10, 10), 3000 + trial);
            const SimulationResult sim = run_simulation(sys, ctrl, noise, horizon);
            for (int t = 0; t < horizon; ++t) {
                iop_worst = std::max(
                    iop_worst, (sim.y[t] - convolve_history(ymap, sim.w, t)).cwiseAbs().maxCoeff());
                iop_worst = std::max(
                    iop_worst, (sim.u[t] - convolve_history(umap, sim.w, t)).cwiseAbs().maxCoeff());
            }
        }
        c.note("iop_map_error", iop_worst);
        worst = std::max(worst, iop_worst);
    }

    c.require(worst <= 1e-6, "closed-loop map reproduction above 1e-6");
}

void criterion_4(Check& c) {
    // Exercised through the chain-sf demo artifacts, exactly as a user runs it.
    const fs::path dir = suite_dir() / "c4-demo";
    fs::remove_all(dir);
    cli::cmd_demo("chain-sf", dir.string());

    const auto blocks = io::read_params_file(dir / "params.txt");
    const auto& phi_x = io::require_block(blocks, "phi_x");
    const int T = phi_x.horizon();

    std::ifstream is(dir / "x.csv");
    std::string line;
    std::getline(is, line);  // header
    double tail_peak = 0.0, map_err = 0.0;
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        const int t = std::stoi(tok);
        Vector x(10);
        for (int i = 0; i < 10; ++i) {
            std::getline(ls, tok, ',');
            x(i) = std::stod(tok);
        }
        if (t > T) {
            tail_peak = std::max(tail_peak, x.cwiseAbs().maxCoeff());
        } else if (t >= 1) {
            const Vector expected = 10.0 * phi_x.at(t).col(chain_center_node(10));
            map_err = std::max(map_err, (x - expected).cwiseAbs().maxCoeff());
        }
        ++rows;
    }
    c.note("rows", rows);
    c.note("tail_peak", tail_peak);
    c.note("map_error", map_err);
    c.require(rows == 25, "x.csv row count != horizon");
    c.require(tail_peak <= 1e-8, "|x[t]| above 1e-8 beyond T");
    c.require(map_err <= 1e-6, "x[t] != 10 Phi_x[t] e_center within 1e-6");
}

void criterion_5(Check& c) {
    Matrix A(1, 1), B(1, 1);
    A << 0.5;
    B << 1.0;
    Matrix C1(2, 1), D12(2, 1);
    C1 << 1.0, 0.0;
    D12 << 0.0, 1.0;
    const Matrix i1 = Matrix::Identity(1, 1);
    LTISystem sys(A, i1, B, C1, Matrix::Zero(2, 1), D12, i1, Matrix::Zero(1, 1),
                  Matrix::Zero(1, 1));

    const Matrix P = oracle::dare_fixed_point(A, B, Matrix::Identity(1, 1),
                                              Matrix::Identity(1, 1), 1e-12);
    const auto r = SlsStateFeedbackSynthesis(30, chain_h2(sys)).synthesize_full(sys);
    c.note("riccati_cost", P(0, 0));
    c.note("h2_cost", r.objective_value);
    c.require(std::abs(r.objective_value - P(0, 0)) <= 1e-6,
              "H2 cost differs from the Riccati cost by more than 1e-6");
    check_certificate(c, r.solve_info, "scalar-lqr");
}

void criterion_6(Check& c) {
    const auto t0 = Clock::now();
    const int n = 10, T = 20, horizon = 25;
    LTISystem sys = make_chain(n);

    const auto iop = synthesize_iop(sys, T);
    FirFeedbackController iop_ctrl(iop.params.X, iop.params.Y);
    const auto sf = SlsStateFeedbackSynthesis(T, chain_h2(sys)).synthesize_full(sys);
    SfSlsController sf_ctrl(sf.params);

    FixedImpulse noise(0, chain_impulse(n, 10.0));
    const SimulationResult r_iop = run_simulation(sys, iop_ctrl, noise, horizon);
    const SimulationResult r_sf = run_simulation(sys, sf_ctrl, noise, horizon);
    double worst = 0.0;
    for (int t = 0; t < horizon; ++t) {
        worst = std::max(worst, (r_iop.u[t] - r_sf.u[t]).cwiseAbs().maxCoeff());
    }
    const double dt = elapsed(t0);
    c.note("max_u_diff", worst);
    c.note("seconds", dt);
    c.require(worst <= 1e-4, "control trajectories differ by more than 1e-4");
    c.require(dt < 60.0, "runtime above 60 s");
    check_certificate(c, iop.solve_info, "iop");
    check_certificate(c, sf.solve_info, "sf");
}

void criterion_7(Check& c) {
    LTISystem sys = make_chain_measured(10, 0.1);
    const auto r =
        SlsOutputFeedbackSynthesis(20, lqg_modules(sys, 0.02, 0.1)).synthesize_full(sys);
    OfSlsController ctrl(r.params, sys.D22());

    double worst = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
        auto noise =
            cli::build_noise("impulse:0,5,10+measgauss:" + std::to_string(seed), sys.dims());
        const SimulationResult sim = run_simulation(sys, ctrl, *noise, 25);
        for (int t = 20; t < 25; ++t) {
            worst = std::max(worst, sim.x[t].cwiseAbs().maxCoeff());
        }
    }
    c.note("noisy_max_x", worst);
    c.require(worst <= 1e-2, "noisy max |x[t]| over [20,25) above 1e-2");

    auto impulse_only = cli::build_noise("impulse:0,5,10", sys.dims());
    const SimulationResult sim = run_simulation(sys, ctrl, *impulse_only, 40);
    double tail = 0.0;
    for (int t = 26; t < 40; ++t) {
        tail = std::max(tail, sim.x[t].cwiseAbs().maxCoeff());
    }
    c.note("noiseless_tail", tail);
    c.require(tail <= 1e-4, "noiseless |x[t]| above 1e-4 for t > T+5");
    check_certificate(c, r.solve_info, "lqg");
}

void criterion_8(Check& c) {
    const double alpha = 2.75;
    LTISystem sys = make_chain(4);
    SynthesisProblem p = assemble_sf(sys, 6);
    p.registry().finalize();
    H2Objective g1(sys.C1(), sys.D12());
    ScalarMultiplier g2(alpha);
    ElementL1 g3("phi_x", 1.0);
    const ObjectiveModule* mods[] = {&g1, &g2, &g3};
    const ObjectiveExpr h = compose_objectives(p, mods);

    auto gen = oracle::rng(4242);
    const auto& reg = p.registry();
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vector phi = oracle::random_vector(gen, reg.size());
        const auto phi_x = reg.unflatten_block(p.block("phi_x"), phi);
        const auto phi_u = reg.unflatten_block(p.block("phi_u"), phi);
        double quad = 0.0, l1 = 0.0;
        for (int tau = 1; tau <= 6; ++tau) {
            quad += (sys.C1() * phi_x.at(tau) + sys.D12() * phi_u.at(tau)).squaredNorm();
            l1 += phi_x.at(tau).cwiseAbs().sum();
        }
        worst = std::max(worst, std::abs(h.evaluate(phi) - (alpha * quad + l1)));
    }
    c.note("max_diff", worst);
    c.require(worst <= 1e-10, "composition differs from the monolithic objective");
}

void criterion_9(Check& c) {
    // Part 1: the solves behind criteria 2-7 re-assert their certificates;
    // here every synthesis path is re-run once and checked post hoc.
    {
        LTISystem sys = make_chain(10);
        const auto sf = SlsStateFeedbackSynthesis(20, chain_h2(sys)).synthesize_full(sys);
        check_certificate(c, sf.solve_info, "sf");
        c.require(sf.max_equality_residual <= 1e-8, "sf equality residual");

        const auto iop = synthesize_iop(sys, 20);
        check_certificate(c, iop.solve_info, "iop");
        c.require(iop.max_equality_residual <= 1e-8, "iop equality residual");

        LTISystem msys = make_chain_measured(10, 0.1);
        const auto of =
            SlsOutputFeedbackSynthesis(20, lqg_modules(msys, 0.02, 0.1)).synthesize_full(msys);
        check_certificate(c, of.solve_info, "of");
        c.require(of.max_equality_residual <= 1e-8, "of equality residual");
    }

    // Part 2: ADMM with zero l1 weight agrees with solve_qp on random programs.
    auto gen = oracle::rng(888);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(gen() % 8);
        const int m = static_cast<int>(gen() % 4);
        const Matrix G = oracle::random_matrix(gen, n, n);
        ConvexProgram p;
        p.n = n;
        p.Q = SparseMatrix((G.transpose() * G + Matrix::Identity(n, n)).sparseView());
        p.q = oracle::random_vector(gen, n);
        const Matrix E = oracle::random_matrix(gen, m, n);
        p.E = SparseMatrix(E.sparseView());
        p.e = E * oracle::random_vector(gen, n);
        for (int i = 0; i < n; ++i) {
            L1Term t;
            t.weight = 0.0;
            t.coeffs = {{i, 1.0}};
            p.l1.push_back(t);
        }
        const auto qp = solve_qp(p);
        const auto admm = solve_admm(p);
        c.require(admm.converged, "admm failed to converge");
        worst = std::max(worst, (admm.phi - qp.phi).cwiseAbs().maxCoeff());
    }
    c.note("admm_vs_qp", worst);
    c.require(worst <= 1e-6, "admm with zero weight differs from solve_qp");
}

void criterion_10(Check& c) {
    const fs::path demo_dir = suite_dir() / "c10-demo";
    const fs::path split_dir = suite_dir() / "c10-split";
    fs::remove_all(demo_dir);
    fs::remove_all(split_dir);

    cli::cmd_demo("chain-sf", demo_dir.string());
    cli::RunConfig cfg = cli::load_config_file(demo_dir / "config.txt");
    cfg.outdir = split_dir.string();
    cli::cmd_synth(cfg);
    cli::cmd_simulate(cfg, split_dir / "params.txt");

    for (const char* f : {"params.txt", "x.csv", "y.csv", "u.csv", "w.csv", "zbar.csv",
                          "x.pgm", "y.pgm", "u.pgm"}) {
        c.require(slurp(demo_dir / f) == slurp(split_dir / f),
                  std::string(f) + " differs between demo and synth+simulate");
    }
    c.note("files_compared", 9);
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        std::function<void(Check&)> run;
    };
    const std::vector<Entry> criteria = {
        {1, "chain construction: spectral radius 0.5 +/- 1e-3, under 1 s", criterion_1},
        {2, "SLS achievability: SF and OF pass the polynomial-product oracle at 1e-8",
         criterion_2},
        {3, "realization correctness: closed-loop maps reproduced at 1e-6 on random noise",
         criterion_3},
        {4, "deadbeat FIR property of the chain-sf demo", criterion_4},
        {5, "scalar H2 cost matches the discrete-Riccati LQR cost at 1e-6", criterion_5},
        {6, "IOP and state-feedback SLS controls agree at 1e-4 on the noiseless chain",
         criterion_6},
        {7, "LQG noise robustness across 20 seeds", criterion_7},
        {8, "objective composition equals the monolithic form at 1e-10 on 100 samples",
         criterion_8},
        {9, "solver certificates and ADMM/QP agreement", criterion_9},
        {10, "synth + simulate is byte-identical to the chain-sf demo", criterion_10},
    };

    // Demo/synth chatter goes to stdout; silence it so the report stays one
    // line per criterion.
    int failures = 0;
    for (const auto& entry : criteria) {
        Check c;
        std::ostringstream sink;
        auto* old = std::cout.rdbuf(sink.rdbuf());
        const auto t0 = Clock::now();
        try {
            entry.run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " [exception: " << e.what() << "]";
        }
        const double dt = elapsed(t0);
        std::cout.rdbuf(old);
        std::printf("%s  criterion %2d: %s (%.2fs)%s\n", c.ok ? "PASS" : "FAIL", entry.id,
                    entry.label, dt, c.detail.str().c_str());
        std::fflush(stdout);
        if (!c.ok) {
            ++failures;
        }
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
