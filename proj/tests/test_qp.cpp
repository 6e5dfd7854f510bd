#include <catch2/catch_amalgamated.hpp>
#include <sstream>
#include <thread>

#include "slskit/errors.hpp"
#include "slskit/qp.hpp"
#include "support/oracles.hpp"

using namespace slskit;
using Catch::Approx;

namespace {

SparseMatrix sparse_from(const Matrix& m) {
    SparseMatrix s = m.sparseView(1.0, 0.0);
    s.makeCompressed();
    return s;
}

ConvexProgram quadratic(const Matrix& Q, const Vector& q, const Matrix& E, const Vector& e,
                        double c0 = 0.0) {
    ConvexProgram p;
    p.n = static_cast<int>(Q.rows());
    p.Q = sparse_from(Q);
    p.q = q;
    p.c0 = c0;
    p.E = sparse_from(E);
    p.e = e;
    return p;
}

// Random feasible equality-constrained QP with strictly convex objective.
ConvexProgram random_program(std::mt19937_64& gen, int n, int m) {
    const Matrix G = oracle::random_matrix(gen, n, n);
    const Matrix Q = G.transpose() * G + Matrix::Identity(n, n);
    const Vector q = oracle::random_vector(gen, n);
    const Matrix E = oracle::random_matrix(gen, m, n);
    const Vector e = E * oracle::random_vector(gen, n);
    return quadratic(Q, q, E, e);
}

}  // namespace

TEST_CASE("symmetric two-variable projection", "[qp]") {
    // min ||phi||^2 s.t. phi_1 + phi_2 = 2  ->  (1, 1)
    Matrix Q = 2.0 * Matrix::Identity(2, 2);
    Matrix E(1, 2);
    E << 1.0, 1.0;
    const auto sol = solve_qp(quadratic(Q, Vector::Zero(2), E, Vector::Constant(1, 2.0)));
    CHECK(sol.phi(0) == Approx(1.0).margin(1e-10));
    CHECK(sol.phi(1) == Approx(1.0).margin(1e-10));
}

TEST_CASE("pinned variable with offset objective", "[qp]") {
    // min (phi - 1)^2 s.t. phi = 3 -> phi* = 3, objective 4
    Matrix Q(1, 1);
    Q << 2.0;
    Vector q(1);
    q << -2.0;
    Matrix E(1, 1);
    E << 1.0;
    const ConvexProgram p = quadratic(Q, q, E, Vector::Constant(1, 3.0), 1.0);
    const auto sol = solve_qp(p);
    CHECK(sol.phi(0) == Approx(3.0).margin(1e-10));
    CHECK(p.objective(sol.phi) == Approx(4.0).margin(1e-9));
}

TEST_CASE("duplicate consistent equalities still solve", "[qp]") {
    Matrix Q = 2.0 * Matrix::Identity(2, 2);
    Matrix E(3, 2);
    E << 1.0, 1.0, 1.0, 1.0, 1.0, -1.0;  // first row repeated
    Vector e(3);
    e << 2.0, 2.0, 0.0;
    const auto sol = solve_qp(quadratic(Q, Vector::Zero(2), E, e));
    CHECK(sol.phi(0) == Approx(1.0).margin(1e-9));
    CHECK(sol.phi(1) == Approx(1.0).margin(1e-9));
    CHECK(sol.info.primal_residual <= 1e-9);
}

TEST_CASE("inconsistent equalities throw with a residual report", "[qp]") {
    Matrix Q = Matrix::Identity(2, 2);
    Matrix E(2, 2);
    E << 1.0, 0.0, 1.0, 0.0;
    Vector e(2);
    e << 1.0, 2.0;  // phi_1 = 1 and phi_1 = 2
    try {
        solve_qp(quadratic(Q, Vector::Zero(2), E, e));
        FAIL("expected InfeasibleSynthesis");
    } catch (const InfeasibleSynthesis& ex) {
        CHECK(ex.max_residual() > 0.1);
    }
}

TEST_CASE("solution certificates hold on random programs", "[qp][property]") {
    auto gen = oracle::rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 8);
        const int m = static_cast<int>(gen() % static_cast<uint64_t>(n));
        const ConvexProgram p = random_program(gen, n, m);
        const auto sol = solve_qp(p);
        // Post-hoc, independent of the solve path.
        if (p.m() > 0) {
            CHECK((p.E * sol.phi - p.e).cwiseAbs().maxCoeff() <= 1e-9);
            CHECK((p.Q * sol.phi + p.q + SparseMatrix(p.E.transpose()) * sol.nu)
                      .cwiseAbs()
                      .maxCoeff() <= 1e-7);
        } else {
            CHECK((p.Q * sol.phi + p.q).cwiseAbs().maxCoeff() <= 1e-7);
        }
    }
}

TEST_CASE("identical programs solve to identical bits", "[qp]") {
    auto gen = oracle::rng(23);
    const ConvexProgram p = random_program(gen, 12, 5);
    const auto a = solve_qp(p);
    const auto b = solve_qp(p);
    CHECK(a.phi == b.phi);
}

TEST_CASE("singular objective directions resolve deterministically", "[qp]") {
    // Q has a null direction not pinned by E; the fallback picks a canonical
    // point and both solves agree.
    Matrix Q = Matrix::Zero(2, 2);
    Q(0, 0) = 2.0;
    Matrix E(1, 2);
    E << 1.0, 0.0;
    const ConvexProgram p = quadratic(Q, Vector::Zero(2), E, Vector::Constant(1, 1.0));
    const auto a = solve_qp(p);
    const auto b = solve_qp(p);
    CHECK(a.phi == b.phi);
    CHECK(a.phi(0) == Approx(1.0).margin(1e-8));
    CHECK(std::abs(a.phi(1)) < 1e-6);
}

TEST_CASE("disjoint programs solve concurrently with serial results", "[qp][threads]") {
    auto gen = oracle::rng(61);
    const ConvexProgram p1 = random_program(gen, 20, 8);
    const ConvexProgram p2 = random_program(gen, 16, 4);
    const Vector serial1 = solve_qp(p1).phi;
    const Vector serial2 = solve_qp(p2).phi;
    Vector par1, par2;
    std::thread t1([&] { par1 = solve_qp(p1).phi; });
    std::thread t2([&] { par2 = solve_qp(p2).phi; });
    t1.join();
    t2.join();
    CHECK(par1 == serial1);
    CHECK(par2 == serial2);
}

TEST_CASE("admm with zero weight matches solve_qp", "[admm][property]") {
    auto gen = oracle::rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(gen() % 6);
        const int m = static_cast<int>(gen() % 3);
        ConvexProgram p = random_program(gen, n, m);
        for (int i = 0; i < n; ++i) {
            L1Term t;
            t.weight = 0.0;
            t.coeffs = {{i, 1.0}};
            p.l1.push_back(t);
        }
        const auto qp = solve_qp(p);
        const auto admm = solve_admm(p);
        CHECK(admm.converged);
        CHECK((admm.phi - qp.phi).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("one-dimensional lasso matches the soft-threshold closed form",
          "[admm][property]") {
    // min 1/2 (phi - a)^2 + lambda |phi|  ->  sign(a) max(|a| - lambda, 0)
    const double cases[][2] = {{2.0, 0.5}, {-0.3, 0.5}, {1.0, 1.0}, {-4.0, 0.25}, {0.0, 1.0}};
    for (const auto& c : cases) {
        const double a = c[0], lambda = c[1];
        Matrix Q(1, 1);
        Q << 1.0;
        Vector q(1);
        q << -a;
        ConvexProgram p = quadratic(Q, q, Matrix::Zero(0, 1), Vector());
        L1Term t;
        t.weight = lambda;
        t.coeffs = {{0, 1.0}};
        p.l1.push_back(t);
        const auto sol = solve_admm(p);
        const double expected = std::copysign(std::max(std::abs(a) - lambda, 0.0), a);
        CHECK(sol.converged);
        CHECK(sol.phi(0) == Approx(expected).margin(2e-7));
    }
}

TEST_CASE("admm returns the best iterate when capped", "[admm]") {
    Matrix Q(1, 1);
    Q << 1.0;
    Vector q(1);
    q << -5.0;
    ConvexProgram p = quadratic(Q, q, Matrix::Zero(0, 1), Vector());
    L1Term t;
    t.weight = 1.0;
    t.coeffs = {{0, 1.0}};
    p.l1.push_back(t);
    AdmmOptions opts;
    opts.max_iterations = 2;
    const auto sol = solve_admm(p, opts);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 2);
    CHECK(sol.phi.size() == 1);
}

TEST_CASE("admm rejects invalid inputs", "[admm]") {
    ConvexProgram p = quadratic(Matrix::Identity(1, 1), Vector::Zero(1), Matrix::Zero(0, 1),
                                Vector());
    L1Term t;
    t.weight = -1.0;
    t.coeffs = {{0, 1.0}};
    p.l1.push_back(t);
    CHECK_THROWS_AS(solve_admm(p), InvalidArgument);

    p.l1.front().weight = 1.0;
    AdmmOptions opts;
    opts.rho = 0.0;
    CHECK_THROWS_AS(solve_admm(p, opts), InvalidArgument);
}

TEST_CASE("registry flattening skips masked entries", "[qp][registry]") {
    VariableRegistry reg;
    const int b = reg.add_block("m", 2, 2, 1, 2);
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(2, 2);
    mask << true, false, false, true;  // keep the diagonal
    reg.set_mask(b, mask);
    reg.finalize();
    CHECK(reg.size() == 4);  // 2 kept entries x 2 spectral indices
    CHECK(reg.index(b, 1, 0, 0) == 0);
    CHECK(reg.index(b, 1, 0, 1) == -1);
    CHECK(reg.index(b, 2, 1, 1) == 3);

    Vector phi(4);
    phi << 1.0, 2.0, 3.0, 4.0;
    const FirTransferMatrix m = reg.unflatten_block(b, phi);
    CHECK(m.at(1)(0, 0) == 1.0);
    CHECK(m.at(1)(0, 1) == 0.0);
    CHECK(m.at(2)(1, 1) == 4.0);
}

TEST_CASE("registry validation", "[qp][registry]") {
    VariableRegistry reg;
    reg.add_block("a", 2, 2, 0, 3);
    CHECK_THROWS_AS(reg.add_block("a", 1, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(reg.add_block("b", 0, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(reg.size(), InvalidArgument);
    reg.finalize();
    CHECK(reg.size() == 16);
    CHECK_THROWS_AS(reg.add_block("c", 1, 1, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(reg.index(0, 4, 0, 0), InvalidArgument);
}

TEST_CASE("program dump lists Q, q, E, e sections", "[qp][io]") {
    Matrix Q(2, 2);
    Q << 2.0, 0.0, 0.0, 4.0;
    Matrix E(1, 2);
    E << 1.0, -1.0;
    const ConvexProgram p =
        quadratic(Q, Vector::Zero(2), E, Vector::Constant(1, 0.5));
    std::ostringstream os;
    dump_program(p, os);
    const std::string text = os.str();
    CHECK(text.find("Q 2") != std::string::npos);
    CHECK(text.find("q 2") != std::string::npos);
    CHECK(text.find("E 1 2 2") != std::string::npos);
    CHECK(text.find("e 1") != std::string::npos);
    CHECK(text.find("0 0.5") != std::string::npos);
}
