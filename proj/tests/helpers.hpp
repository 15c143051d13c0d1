#pragma once

// Shared generators for the property-style tests. Everything is seeded so
// runs are reproducible.

#include <complex>
#include <random>

#include "qgame/game.hpp"
#include "qgame/linalg.hpp"

namespace qgame::testing {

using Rng = std::mt19937_64;

inline cx random_scalar(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(rng);
    return m;
}

// Random 2x2 unitary from an explicit parameterization.
inline Matrix random_unitary2(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    double theta = u(rng), alpha = u(rng), beta = u(rng);
    double c = std::cos(theta), s = std::sin(theta);
    auto e = [](double phi) { return cx{std::cos(phi), std::sin(phi)}; };
    return Matrix(2, 2, {c * e(alpha), s * e(beta), -s * e(-beta), c * e(-alpha)});
}

// Random density matrix via G G^dagger / Tr.
inline Matrix random_density(Rng& rng, std::size_t dim) {
    Matrix g = random_matrix(rng, dim, dim);
    Matrix rho = g * g.adjoint();
    cx t = rho.trace();
    return (1.0 / t.real()) * rho;
}

inline GameState random_state(Rng& rng, std::size_t m1 = 2, std::size_t m2 = 2) {
    return GameState(m1, m2, random_density(rng, m1 * m2));
}

inline Ket random_ket(Rng& rng, std::size_t dim) {
    std::vector<cx> amp(dim);
    for (cx& v : amp) v = random_scalar(rng);
    return Ket(amp).normalized();
}

inline MixedTactic random_mixed_tactic(Rng& rng) {
    std::uniform_int_distribution<int> pick_player(1, 2);
    std::uniform_int_distribution<int> pick_count(1, 3);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    MixedTactic t;
    t.player = pick_player(rng);
    int count = pick_count(rng);
    std::vector<double> weights(count);
    double total = 0.0;
    for (double& wv : weights) total += (wv = u(rng));
    for (int i = 0; i < count; ++i) t.branches.push_back({weights[i] / total, random_unitary2(rng)});
    // Re-balance the last branch so the probabilities sum to 1 exactly.
    double sum = 0.0;
    for (int i = 0; i + 1 < count; ++i) sum += t.branches[i].probability;
    t.branches.back().probability = 1.0 - sum;
    return t;
}

}  // namespace qgame::testing
