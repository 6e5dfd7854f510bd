#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slskit/errors.hpp"
#include "slskit/io.hpp"
#include "support/oracles.hpp"

using namespace slskit;
using Catch::Approx;

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "slskit-io-test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("fir block serialization round-trips doubles exactly", "[io][property]") {
    auto gen = oracle::rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        FirTransferMatrix m(3, 2, trial % 2, 4 + trial % 3);
        for (int tau = m.start(); tau <= m.horizon(); ++tau) {
            m.at(tau) = oracle::random_matrix(gen, 3, 2, std::pow(10.0, trial - 5));
        }
        std::stringstream ss;
        io::write_fir_block(ss, "blk", m);
        const auto blocks = io::read_fir_blocks(ss);
        const auto& back = blocks.at("blk");
        REQUIRE(back.start() == m.start());
        REQUIRE(back.horizon() == m.horizon());
        for (int tau = m.start(); tau <= m.horizon(); ++tau) {
            CHECK(back.at(tau) == m.at(tau));  // bitwise
        }
    }
}

TEST_CASE("params file headers carry name, shape, start, horizon", "[io]") {
    FirTransferMatrix m(2, 2, 1, 3);
    m.at(1) << 1.0, 2.0, 3.0, 4.0;
    std::stringstream ss;
    io::write_fir_block(ss, "phi_x", m);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "phi_x 2 2 1 3");
}

TEST_CASE("reading malformed parameter text fails cleanly", "[io]") {
    std::stringstream truncated("blk 2 2 0 1\n1 2\n3 4\n5 6\n");
    CHECK_THROWS_AS(io::read_fir_blocks(truncated), ParseError);

    std::stringstream bad_header("blk 0 2 0 1\n");
    CHECK_THROWS_AS(io::read_fir_blocks(bad_header), ParseError);
}

TEST_CASE("matrix files parse rows of whitespace-separated decimals", "[io]") {
    std::stringstream ss("1 2 3\n4 5 6\n");
    const Matrix m = io::read_matrix(ss, "test");
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);

    std::stringstream ragged("1 2\n3\n");
    CHECK_THROWS_AS(io::read_matrix(ragged, "test"), ParseError);

    std::stringstream junk("1 x\n");
    try {
        io::read_matrix(junk, "test");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("test:1") != std::string::npos);
    }
}

TEST_CASE("csv schema: header, 9 significant digits, one row per step", "[io]") {
    Signal s(2);
    Vector v(2);
    v << 1.0 / 3.0, -1234.5;
    s.push_back(v);
    s.push_back(Vector::Zero(2));

    const fs::path path = temp_dir() / "sig.csv";
    io::write_signal_csv(path, s);

    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,0,1");
    std::getline(is, line);
    CHECK(line == "0,3.33333333e-01,-1.23450000e+03");
    std::getline(is, line);
    CHECK(line == "1,0.00000000e+00,0.00000000e+00");
    CHECK_FALSE(std::getline(is, line));
}

TEST_CASE("pgm heatmap encodes clamped log magnitude", "[io]") {
    Signal s(1);
    Vector v(1);
    v << 10.0;  // log10 = 1 -> 255
    s.push_back(v);
    v << 1e-8;  // log10 = -8 -> 0
    s.push_back(v);
    v << 0.0;  // -inf clamps to -8 -> 0
    s.push_back(v);
    v << 1.0;  // log10 = 0 -> round(8/9*255) = 227
    s.push_back(v);

    const fs::path path = temp_dir() / "sig.pgm";
    io::write_signal_pgm(path, s);

    std::ifstream is(path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    is >> magic >> w >> h >> maxval;
    CHECK(magic == "P2");
    CHECK(w == 4);
    CHECK(h == 1);
    CHECK(maxval == 255);
    int p0, p1, p2, p3;
    is >> p0 >> p1 >> p2 >> p3;
    CHECK(p0 == 255);
    CHECK(p1 == 0);
    CHECK(p2 == 0);
    CHECK(p3 == 227);
}
