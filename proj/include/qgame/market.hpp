#pragma once

// Market reading of the Newcomb game: strategies live on the sphere of
// qubit pure states, parameterized by the projective coordinate z with
// |psi_z> ~ |0> + z|1>. Omega replies with the Fourier (supply)
// representation of the human's strategy, z -> (1-z)/(1+z). The payoff
// landscape Tr(M W_z) is scanned over two square charts (z and u = 1/z)
// and its extrema located by shrinking-grid refinement.

#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "qgame/game.hpp"
#include "qgame/newcomb.hpp"

namespace qgame {

// Homogeneous coordinates (a,b) for the strategy a|0> + b|1>, z = b/a.
// a = 0 is the point at infinity (the pure |1> strategy).
struct ProjectivePoint {
    cx a{1.0, 0.0};
    cx b{0.0, 0.0};

    static ProjectivePoint from_z(cx z) { return ProjectivePoint{cx{1.0, 0.0}, z}.canonical(); }
    static ProjectivePoint infinity() { return ProjectivePoint{cx{0.0, 0.0}, cx{1.0, 0.0}}; }

    bool is_infinity(double tol = kStructuralTol) const {
        return std::abs(a) <= tol * std::abs(b);
    }

    // z = b/a; infinite for the |1> pole.
    cx z() const {
        if (is_infinity()) return cx{std::numeric_limits<double>::infinity(), 0.0};
        return b / a;
    }

    // Unit norm with the largest-modulus component real positive (ties go
    // to the first component). Gives each ray a unique representative.
    ProjectivePoint canonical() const {
        double na = std::abs(a), nb = std::abs(b);
        if (na == 0.0 && nb == 0.0) throw ValidationError("projective point (0,0) is invalid");
        cx lead = (na >= nb) ? a : b;
        cx phase = lead / std::abs(lead);
        double scale = std::sqrt(na * na + nb * nb);
        return {a / (phase * scale), b / (phase * scale)};
    }
};

// Chordal distance between rays on the strategy sphere; 0 iff the points
// are projectively equal.
inline double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    ProjectivePoint cp = p.canonical(), cq = q.canonical();
    // sine of the angle between the rays, via the cross term (stable where
    // 1 - |<p|q>|^2 would cancel)
    return std::abs(cp.a * cq.b - cp.b * cq.a);
}

inline Ket strategy_from_projective(const ProjectivePoint& p) {
    ProjectivePoint c = p.canonical();
    return Ket({c.a, c.b});
}

// Supply representation of the strategy: Hadamard on homogeneous
// coordinates, (a,b) -> (a+b, a-b). Agrees with z -> (1-z)/(1+z) at every
// finite z != -1 and has no singularities.
inline ProjectivePoint omega_response(const ProjectivePoint& p) {
    return ProjectivePoint{p.a + p.b, p.a - p.b}.canonical();
}

// Fourier transform between the demand and supply amplitude tuples.
inline Ket demand_to_supply(const Ket& psi) { return apply(dft_matrix(psi.dim()), psi); }

// Pure product state: human plays psi_z, Omega plays the supply
// representation of the same strategy.
inline GameState build_market_state(const ProjectivePoint& p) {
    return GameState::pure(strategy_from_projective(p), strategy_from_projective(omega_response(p)));
}

inline double market_payoff(const ProjectivePoint& p) {
    static const PayoffObservable obs = build_payoff_observable(newcomb_payoff_matrix());
    return expected_payoff(obs, build_market_state(p));
}

enum class Chart { finite, inverse };  // coordinates are z, or u = 1/z

inline ProjectivePoint chart_point(Chart chart, double re, double im) {
    // Inverse chart: u = 1/z means homogeneous (a,b) = (u, 1).
    if (chart == Chart::finite) return ProjectivePoint{cx{1.0, 0.0}, cx{re, im}};
    return ProjectivePoint{cx{re, im}, cx{1.0, 0.0}};
}

struct LandscapeSample {
    Chart chart;
    double re, im;
    double payoff;
};

struct ScanConfig {
    std::size_t grid_n = 401;     // samples per axis
    double radius = 4.0;          // half-width of the square chart window
    bool inverse_chart = true;    // also cover a neighborhood of infinity
    std::size_t refinement = 24;  // shrinking-grid iterations for extrema
    unsigned threads = 1;

    void validate() const {
        if (grid_n < 3) throw ValidationError("scan grid_n must be >= 3");
        if (!(radius > 0.0)) throw ValidationError("scan radius must be positive");
        if (threads == 0) throw ValidationError("thread count must be >= 1");
    }
};

// Uniform grid over the chart window(s), ordered by (chart, row, column).
// Output is independent of the worker count: samples land in preallocated
// slots keyed by index.
inline std::vector<LandscapeSample> scan_landscape(const ScanConfig& cfg) {
    cfg.validate();
    std::vector<Chart> charts{Chart::finite};
    if (cfg.inverse_chart) charts.push_back(Chart::inverse);

    const std::size_t n = cfg.grid_n;
    const std::size_t per_chart = n * n;
    std::vector<LandscapeSample> out(charts.size() * per_chart);

    auto coord = [&](std::size_t idx) {
        return -cfg.radius + 2.0 * cfg.radius * static_cast<double>(idx) /
                                 static_cast<double>(n - 1);
    };
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            Chart chart = charts[k / per_chart];
            std::size_t row = (k % per_chart) / n;
            std::size_t col = k % n;
            double im = coord(row), re = coord(col);
            out[k] = {chart, re, im, market_payoff(chart_point(chart, re, im))};
        }
    };

    const std::size_t total = out.size();
    unsigned workers = std::min<unsigned>(cfg.threads, static_cast<unsigned>(total));
    if (workers <= 1) {
        fill(0, total);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (total + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            std::size_t begin = t * chunk;
            std::size_t end = std::min(total, begin + chunk);
            if (begin < end) pool.emplace_back(fill, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }
    return out;
}

struct Extrema {
    ProjectivePoint argmax;
    double max;
    ProjectivePoint argmin;
    double min;
};

namespace detail {

struct ChartBest {
    Chart chart;
    double re, im, payoff;
};

// Local shrinking-grid refinement around a chart point. The landscape is
// smooth, so halving the window around the best cell converges fast.
inline ChartBest refine(ChartBest best, double cell, std::size_t iterations, bool maximize) {
    double half = 2.0 * cell;
    for (std::size_t it = 0; it < iterations; ++it) {
        ChartBest next = best;
        const int n = 9;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double re = best.re - half + 2.0 * half * i / (n - 1);
                double im = best.im - half + 2.0 * half * j / (n - 1);
                double p = market_payoff(chart_point(best.chart, re, im));
                if (maximize ? p > next.payoff : p < next.payoff) next = {best.chart, re, im, p};
            }
        best = next;
        half *= 0.5;
    }
    return best;
}

}  // namespace detail

inline Extrema find_extrema(const ScanConfig& cfg) {
    cfg.validate();
    std::vector<LandscapeSample> samples = scan_landscape(cfg);

    detail::ChartBest hi{Chart::finite, 0, 0, -std::numeric_limits<double>::infinity()};
    detail::ChartBest lo{Chart::finite, 0, 0, std::numeric_limits<double>::infinity()};
    for (const LandscapeSample& s : samples) {
        if (s.payoff > hi.payoff) hi = {s.chart, s.re, s.im, s.payoff};
        if (s.payoff < lo.payoff) lo = {s.chart, s.re, s.im, s.payoff};
    }

    double cell = 2.0 * cfg.radius / static_cast<double>(cfg.grid_n - 1);
    hi = detail::refine(hi, cell, cfg.refinement, true);
    lo = detail::refine(lo, cell, cfg.refinement, false);

    return {chart_point(hi.chart, hi.re, hi.im).canonical(), hi.payoff,
            chart_point(lo.chart, lo.re, lo.im).canonical(), lo.payoff};
}

}  // namespace qgame
