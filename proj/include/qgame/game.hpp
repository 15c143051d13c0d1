#pragma once

// Two-player quantum game formalism: strategy density operators on the
// tensor product of the players' spaces, diagonal payoff observables,
// expected payoff Tr(M W), and per-player unitary / mixed-unitary tactics.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qgame/linalg.hpp"

namespace qgame {

// Player 1 payoffs, in dollars, indexed (row = player-1 strategy,
// column = player-2 strategy).
struct PayoffMatrix {
    std::size_t m1 = 0, m2 = 0;
    std::vector<double> entries;  // row-major, m1*m2

    PayoffMatrix() = default;
    PayoffMatrix(std::size_t m1_, std::size_t m2_, std::vector<double> e)
        : m1(m1_), m2(m2_), entries(std::move(e)) {
        if (m1 == 0 || m2 == 0) throw ValidationError("payoff matrix dimensions must be positive");
        if (entries.size() != m1 * m2)
            throw ValidationError("payoff matrix entry count does not match dimensions");
        for (double v : entries)
            if (!std::isfinite(v)) throw ValidationError("payoff matrix entries must be finite");
    }

    double at(std::size_t r, std::size_t s) const { return entries.at(r * m2 + s); }
};

// Diagonal Hermitian observable on the joint space; eigenvalue on joint
// basis index r*m2+s is the payoff entry (r,s).
struct PayoffObservable {
    std::size_t m1 = 0, m2 = 0;
    std::vector<double> diag;

    std::size_t dim() const { return m1 * m2; }
};

inline PayoffObservable build_payoff_observable(const PayoffMatrix& m) {
    PayoffObservable obs;
    obs.m1 = m.m1;
    obs.m2 = m.m2;
    obs.diag = m.entries;  // joint index r*m2+s matches the row-major layout
    return obs;
}

// Density operator on H1 (x) H2. Validated at construction: Hermitian,
// unit trace, positive semidefinite within tolerance.
class GameState {
public:
    GameState(std::size_t m1, std::size_t m2, Matrix rho)
        : m1_(m1), m2_(m2), rho_(std::move(rho)) {
        validate();
    }

    static GameState pure(const Ket& k1, const Ket& k2) {
        Ket joint = kron(k1.normalized(), k2.normalized());
        return GameState(k1.dim(), k2.dim(), outer(joint, joint));
    }

    std::size_t m1() const { return m1_; }
    std::size_t m2() const { return m2_; }
    std::size_t dim() const { return m1_ * m2_; }
    const Matrix& rho() const { return rho_; }

    double purity() const { return (rho_ * rho_).trace().real(); }

    // Reduced density matrix of player 1 (partial trace over player 2).
    Matrix reduced_player1() const {
        Matrix r(m1_, m1_);
        for (std::size_t i = 0; i < m1_; ++i)
            for (std::size_t j = 0; j < m1_; ++j)
                for (std::size_t s = 0; s < m2_; ++s) r(i, j) += rho_(i * m2_ + s, j * m2_ + s);
        return r;
    }

private:
    void validate() const {
        if (!rho_.square() || rho_.rows() != dim())
            throw InternalConsistencyError("game state: density matrix dimension mismatch");
        if (!rho_.all_finite())
            throw InternalConsistencyError("game state: non-finite density entries");
        if (!is_hermitian(rho_, kStructuralTol))
            throw InternalConsistencyError("game state: density matrix not Hermitian");
        if (std::abs(rho_.trace() - cx{1.0, 0.0}) > kStructuralTol)
            throw InternalConsistencyError("game state: trace differs from 1");
        if (min_eigenvalue(rho_) < -1e-10)
            throw InternalConsistencyError("game state: negative eigenvalue");
    }

    std::size_t m1_, m2_;
    Matrix rho_;
};

// Probabilistic mixture of unitaries acting on one player's space.
struct MixedTactic {
    struct Branch {
        double probability;
        Matrix unitary;
    };

    int player = 1;  // 1 or 2
    std::vector<Branch> branches;

    void validate(std::size_t player_dim, double unitary_tol = kStructuralTol,
                  double prob_tol = kStructuralTol) const {
        if (player != 1 && player != 2) throw ValidationError("tactic player must be 1 or 2");
        if (branches.empty()) throw ValidationError("tactic needs at least one branch");
        double total = 0.0;
        for (const Branch& b : branches) {
            if (!(b.probability >= 0.0 && b.probability <= 1.0))
                throw ValidationError("tactic branch probability outside [0,1]");
            total += b.probability;
            if (b.unitary.rows() != player_dim)
                throw DimensionError("tactic unitary does not match the player's space");
            if (!is_unitary(b.unitary, unitary_tol))
                throw ValidationError("tactic branch matrix is not unitary");
        }
        if (std::abs(total - 1.0) > prob_tol)
            throw ValidationError("tactic branch probabilities do not sum to 1");
    }
};

// Embed a single-player unitary into the joint space.
inline Matrix embed_tactic(std::size_t m1, std::size_t m2, int player, const Matrix& u) {
    if (player == 1) return kron(u, Matrix::identity(m2));
    if (player == 2) return kron(Matrix::identity(m1), u);
    throw ValidationError("player must be 1 or 2");
}

inline GameState apply_pure_tactic(const GameState& state, int player, const Matrix& u,
                                   double unitary_tol = kStructuralTol) {
    std::size_t d = (player == 1) ? state.m1() : state.m2();
    if (u.rows() != d || u.cols() != d)
        throw DimensionError("tactic unitary does not match the player's space");
    if (!is_unitary(u, unitary_tol)) throw ValidationError("tactic matrix is not unitary");
    Matrix big = embed_tactic(state.m1(), state.m2(), player, u);
    return GameState(state.m1(), state.m2(), big * state.rho() * big.adjoint());
}

inline GameState apply_mixed_tactic(const GameState& state, const MixedTactic& t,
                                    double unitary_tol = kStructuralTol,
                                    double prob_tol = kStructuralTol) {
    std::size_t d = (t.player == 1) ? state.m1() : state.m2();
    t.validate(d, unitary_tol, prob_tol);
    Matrix out(state.dim(), state.dim());
    for (const MixedTactic::Branch& b : t.branches) {
        Matrix big = embed_tactic(state.m1(), state.m2(), t.player, b.unitary);
        out = out + b.probability * (big * state.rho() * big.adjoint());
    }
    return GameState(state.m1(), state.m2(), out);
}

inline double expected_payoff(const PayoffObservable& obs, const GameState& state) {
    if (obs.m1 != state.m1() || obs.m2 != state.m2())
        throw DimensionError("payoff observable does not match the game state");
    cx t{0.0, 0.0};
    for (std::size_t k = 0; k < obs.dim(); ++k) t += obs.diag[k] * state.rho()(k, k);
    if (std::abs(t.imag()) > 1e-10)
        throw InternalConsistencyError("expected payoff has a non-negligible imaginary part");
    return t.real();
}

struct Outcome {
    std::size_t r, s;
    double probability;
};

// Diagonal of the density operator read as joint event probabilities.
inline std::vector<Outcome> classical_outcome_distribution(const GameState& state) {
    std::vector<Outcome> out;
    out.reserve(state.dim());
    double total = 0.0;
    for (std::size_t r = 0; r < state.m1(); ++r)
        for (std::size_t s = 0; s < state.m2(); ++s) {
            double p = state.rho()(r * state.m2() + s, r * state.m2() + s).real();
            total += p;
            out.push_back({r, s, p});
        }
    if (std::abs(total - 1.0) > 1e-10)
        throw InternalConsistencyError("outcome probabilities do not sum to 1");
    return out;
}

}  // namespace qgame
