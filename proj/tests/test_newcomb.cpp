#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <complex>

#include "helpers.hpp"
#include "qgame/newcomb.hpp"

using namespace qgame;
using qgame::testing::Rng;

namespace {

// Independent brute-force oracle: the full 4x4 matrix chain of the
// protocol, written with raw arrays so it shares no code with the library
// path it checks.
using M4 = std::array<std::array<std::complex<double>, 4>, 4>;

M4 zero4() {
    M4 m{};
    return m;
}

M4 mul(const M4& a, const M4& b) {
    M4 r = zero4();
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

M4 dagger(const M4& a) {
    M4 r = zero4();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i][j] = std::conj(a[j][i]);
    return r;
}

M4 conjugate(const M4& u, const M4& rho) { return mul(mul(u, rho), dagger(u)); }

M4 f_tensor_i() {
    const double h = 1.0 / std::sqrt(2.0);
    M4 m = zero4();
    // F (x) I in the joint basis |00>,|01>,|10>,|11>
    m[0][0] = h;
    m[0][2] = h;
    m[1][1] = h;
    m[1][3] = h;
    m[2][0] = h;
    m[2][2] = -h;
    m[3][1] = h;
    m[3][3] = -h;
    return m;
}

M4 n_tensor_i() {
    M4 m = zero4();
    m[0][2] = 1.0;
    m[1][3] = 1.0;
    m[2][0] = 1.0;
    m[3][1] = 1.0;
    return m;
}

struct OracleResult {
    M4 final_rho;
    double payoff;
};

OracleResult protocol_oracle(double v, double w) {
    M4 rho = zero4();
    rho[0][0] = v;
    rho[3][3] = 1.0 - v;

    M4 fi = f_tensor_i(), ni = n_tensor_i();
    rho = conjugate(fi, rho);
    M4 flipped = conjugate(ni, rho);
    M4 mixed = zero4();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) mixed[i][j] = w * flipped[i][j] + (1.0 - w) * rho[i][j];
    rho = conjugate(fi, mixed);

    const double payoffs[4] = {1000.0, 1001000.0, 0.0, 1000000.0};
    double pay = 0.0;
    for (int k = 0; k < 4; ++k) pay += payoffs[k] * rho[k][k].real();
    return {rho, pay};
}

double diff_vs_oracle(const Matrix& rho, const M4& oracle) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(rho(i, j) - oracle[i][j]));
    return d;
}

}  // namespace

TEST_CASE("newcomb_payoff_matrix entries") {
    PayoffMatrix m = newcomb_payoff_matrix();
    CHECK(m.at(0, 0) == 1000.0);
    CHECK(m.at(0, 1) == 1001000.0);
    CHECK(m.at(1, 0) == 0.0);
    CHECK(m.at(1, 1) == 1000000.0);
}

TEST_CASE("initial_state") {
    SECTION("v=1 is the |00> projector") {
        Matrix rho = initial_state(1.0).rho();
        CHECK(rho(0, 0) == cx{1.0, 0.0});
        for (int i = 1; i < 4; ++i) CHECK(rho(i, i) == cx{0.0, 0.0});
    }
    SECTION("v=0 is the |11> projector") {
        Matrix rho = initial_state(0.0).rho();
        CHECK(rho(3, 3) == cx{1.0, 0.0});
    }
    SECTION("v=1/2 mixes the two projectors with no off-diagonals") {
        Matrix rho = initial_state(0.5).rho();
        CHECK(rho(0, 0) == cx{0.5, 0.0});
        CHECK(rho(3, 3) == cx{0.5, 0.0});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(rho(i, j) == cx{0.0, 0.0});
    }
    SECTION("out-of-range probability is rejected") {
        CHECK_THROWS_AS(initial_state(1.5), ValidationError);
        CHECK_THROWS_AS(initial_state(-0.1), ValidationError);
    }
}

TEST_CASE("run_meyer_protocol against the brute-force chain oracle") {
    SECTION("pure cases") {
        auto [trace0, payoff0] = run_meyer_protocol({1.0, 0.0});
        CHECK(payoff0 == Catch::Approx(1000.0).margin(1e-9));
        CHECK(diff_vs_oracle(trace0.steps.back().state.rho(),
                             protocol_oracle(1.0, 0.0).final_rho) <= 1e-13);

        for (double w : {0.0, 0.4, 1.0}) {
            auto [trace1, payoff1] = run_meyer_protocol({0.0, w});
            CHECK(payoff1 == Catch::Approx(1000000.0).margin(1e-9));
            CHECK(diff_vs_oracle(trace1.steps.back().state.rho(),
                                 protocol_oracle(0.0, w).final_rho) <= 1e-13);
        }
    }
    SECTION("mixed case reproduces the printed intermediate matrices") {
        auto [trace, payoff] = run_meyer_protocol({0.3, 0.7});
        REQUIRE(trace.steps.size() == 4);
        // after step 1: (1/2)[[1, 2v-1],[2v-1, 1]] with 2v-1 = -0.4
        Matrix mid = trace.steps[1].human_reduced;
        CHECK(mid(0, 0).real() == Catch::Approx(0.5).margin(1e-13));
        CHECK(mid(0, 1).real() == Catch::Approx(-0.2).margin(1e-13));
        CHECK(mid(1, 0).real() == Catch::Approx(-0.2).margin(1e-13));
        // final reduced matrix diag(v, 1-v)
        Matrix fin = trace.steps[3].human_reduced;
        CHECK(fin(0, 0).real() == Catch::Approx(0.3).margin(1e-13));
        CHECK(fin(1, 1).real() == Catch::Approx(0.7).margin(1e-13));
        CHECK(std::abs(fin(0, 1)) <= 1e-13);
        CHECK(payoff == Catch::Approx(0.3 * 1000.0 + 0.7 * 1000000.0).margin(1e-6));
    }
    SECTION("random parameter sweep matches the oracle") {
        Rng rng(31);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int rep = 0; rep < 200; ++rep) {
            double v = u(rng), w = u(rng);
            auto [trace, payoff] = run_meyer_protocol({v, w});
            OracleResult expect = protocol_oracle(v, w);
            CHECK(std::abs(payoff - expect.payoff) <= 1e-9);
            CHECK(diff_vs_oracle(trace.steps.back().state.rho(), expect.final_rho) <= 1e-13);
        }
    }
    SECTION("trace entries carry valid reduced matrices") {
        auto [trace, payoff] = run_meyer_protocol({0.25, 0.6});
        for (const TraceEntry& e : trace.steps) {
            CHECK(e.human_reduced.trace().real() == Catch::Approx(1.0).margin(1e-12));
            for (double ev : hermitian_eigenvalues(e.human_reduced)) {
                CHECK(ev >= -1e-12);
                CHECK(ev <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("verify_restoration") {
    SECTION("coarse grid passes at 1e-12") {
        RestorationReport rep = verify_restoration(11, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.max_deviation <= 1e-12);
    }
    SECTION("corner cases restore exactly up to rounding") {
        for (double v : {0.0, 1.0})
            for (double w : {0.0, 1.0}) {
                auto [trace, payoff] = run_meyer_protocol({v, w});
                CHECK(max_abs_diff(trace.steps.back().state.rho(),
                                   initial_state(v).rho()) <= 1e-15);
            }
    }
    SECTION("rejects degenerate grids") {
        CHECK_THROWS_AS(verify_restoration(1, 1e-12), ValidationError);
    }
}

TEST_CASE("payoff_formula") {
    CHECK(payoff_formula(1.0) == Catch::Approx(1000.0));
    CHECK(payoff_formula(0.0) == Catch::Approx(1000000.0));
    CHECK(payoff_formula(0.5) == Catch::Approx(500500.0));

    SECTION("matches the protocol for all tactics") {
        for (double v : {0.0, 0.2, 0.5, 0.8, 1.0})
            for (double w : {0.0, 0.3, 0.7, 1.0})
                CHECK(std::abs(run_meyer_protocol({v, w}).payoff - payoff_formula(v)) <= 1e-6);
    }
    SECTION("tactic independence") {
        for (double v : {0.1, 0.6}) {
            double p1 = run_meyer_protocol({v, 0.2}).payoff;
            double p2 = run_meyer_protocol({v, 0.9}).payoff;
            CHECK(std::abs(p1 - p2) <= 1e-6);
        }
    }
    SECTION("strictly decreasing in v") {
        double prev = payoff_formula(0.0);
        for (int i = 1; i <= 20; ++i) {
            double cur = payoff_formula(i / 20.0);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("Monte Carlo sampling converges to the channel average") {
    ProtocolParams p{0.4, 0.65};
    double channel = run_meyer_protocol(p).payoff;
    double sampled = sample_protocol_payoff(p, 20000, 12345);
    // The tactic never changes the payoff, so even the per-branch values
    // agree; the tolerance covers rounding only.
    CHECK(sampled == Catch::Approx(channel).margin(1e-6));
}
