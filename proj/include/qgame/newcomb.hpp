#pragma once

// The Newcomb game and Meyer's three-step tactic protocol: build the
// correlated initial state, run the Hadamard / probabilistic-negation /
// Hadamard sequence, and verify that the joint state is restored and the
// payoff is independent of the change-of-mind probability.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "qgame/game.hpp"

namespace qgame {

// Player 1 payoffs for the two-box game: rows are take-both / take-opaque,
// columns are Omega's empty / filled opaque box.
inline PayoffMatrix newcomb_payoff_matrix() {
    return PayoffMatrix(2, 2, {1000.0, 1001000.0, 0.0, 1000000.0});
}

struct ProtocolParams {
    double v;  // probability player 1 intends the take-both strategy |0>
    double w;  // probability player 1 applies the negation tactic

    void validate() const {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("v must lie in [0,1]");
        if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("w must lie in [0,1]");
    }
};

// Perfectly correlated initial state: Omega's qubit matches player 1's
// intended strategy in every branch, v|00><00| + (1-v)|11><11|.
inline GameState initial_state(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("v must lie in [0,1]");
    Ket k00 = kron(Ket::basis(2, 0), Ket::basis(2, 0));
    Ket k11 = kron(Ket::basis(2, 1), Ket::basis(2, 1));
    return GameState(2, 2, v * outer(k00, k00) + (1.0 - v) * outer(k11, k11));
}

struct TraceEntry {
    std::string label;
    GameState state;
    Matrix human_reduced;
};

struct ProtocolTrace {
    std::vector<TraceEntry> steps;  // initial, after step 1, 2, 3
};

struct ProtocolResult {
    ProtocolTrace trace;
    double payoff;
};

inline ProtocolResult run_meyer_protocol(const ProtocolParams& p) {
    p.validate();
    ProtocolTrace trace;
    auto record = [&trace](const std::string& label, const GameState& s) {
        trace.steps.push_back({label, s, s.reduced_player1()});
    };

    GameState state = initial_state(p.v);
    record("initial", state);

    state = apply_pure_tactic(state, 1, hadamard());
    record("after F (x) I", state);

    MixedTactic mind_change;
    mind_change.player = 1;
    mind_change.branches = {{p.w, negation()}, {1.0 - p.w, Matrix::identity(2)}};
    state = apply_mixed_tactic(state, mind_change);
    record("after mixed N/I", state);

    state = apply_pure_tactic(state, 1, hadamard());
    record("after F (x) I", state);

    double payoff = expected_payoff(build_payoff_observable(newcomb_payoff_matrix()), state);
    return {std::move(trace), payoff};
}

// Closed form of the protocol payoff: the final state equals the initial
// one, so only the initial strategy mixture matters.
inline double payoff_formula(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("v must lie in [0,1]");
    return 1000.0 * v + 1000000.0 * (1.0 - v);
}

struct RestorationReport {
    std::size_t grid_n;
    double tol;
    double max_deviation;
    double worst_v, worst_w;
    bool pass;
};

// Sweep (v,w) over a uniform grid and compare the final joint state with
// the initial one entrywise.
inline RestorationReport verify_restoration(std::size_t grid_n, double tol = 1e-12) {
    if (grid_n < 2) throw ValidationError("verify_restoration needs grid_n >= 2");
    RestorationReport rep{grid_n, tol, 0.0, 0.0, 0.0, true};
    for (std::size_t i = 0; i < grid_n; ++i)
        for (std::size_t j = 0; j < grid_n; ++j) {
            double v = static_cast<double>(i) / static_cast<double>(grid_n - 1);
            double w = static_cast<double>(j) / static_cast<double>(grid_n - 1);
            ProtocolResult res = run_meyer_protocol({v, w});
            double dev = max_abs_diff(res.trace.steps.back().state.rho(), initial_state(v).rho());
            if (dev > rep.max_deviation) {
                rep.max_deviation = dev;
                rep.worst_v = v;
                rep.worst_w = w;
            }
        }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

// Monte Carlo variant of the protocol: samples the step-2 branch instead of
// averaging over it. Converges to run_meyer_protocol's payoff as the sample
// count grows.
inline double sample_protocol_payoff(const ProtocolParams& p, std::size_t n_samples,
                                     std::uint64_t seed) {
    p.validate();
    if (n_samples == 0) throw ValidationError("need at least one sample");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(p.w);
    PayoffObservable obs = build_payoff_observable(newcomb_payoff_matrix());
    double total = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        GameState state = initial_state(p.v);
        state = apply_pure_tactic(state, 1, hadamard());
        state = apply_pure_tactic(state, 1, flip(rng) ? negation() : Matrix::identity(2));
        state = apply_pure_tactic(state, 1, hadamard());
        total += expected_payoff(obs, state);
    }
    return total / static_cast<double>(n_samples);
}

}  // namespace qgame
