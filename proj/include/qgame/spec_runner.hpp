#pragma once

// Declarative game specs: a JSON document names the payoff matrix, the
// initial joint state and an ordered move list; executing it replays the
// moves through the game model and reports the expected payoff. Also home
// to the stable text formats (landscape CSV, fixed numeric formatting) and
// atomic file output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgame/game.hpp"
#include "qgame/market.hpp"

namespace qgame {

using json = nlohmann::json;

// -- fixed numeric formatting ------------------------------------------------

inline std::string format_dollars(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string format_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8f", v);
    return buf;
}

// -- spec document -----------------------------------------------------------

struct TacticSpec {
    enum class Kind { named, matrix, mixture };
    Kind kind = Kind::named;
    std::string name;  // "hadamard" | "negation" | "identity" | "dft"
    Matrix matrix;
    std::vector<std::pair<double, TacticSpec>> mixture;  // branches are named/matrix only

    bool operator==(const TacticSpec& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::named:
                return name == o.name;
            case Kind::matrix:
                return matrix.rows() == o.matrix.rows() && matrix.cols() == o.matrix.cols() &&
                       matrix.data() == o.matrix.data();
            case Kind::mixture:
                return mixture == o.mixture;
        }
        return false;
    }
};

struct MoveSpec {
    int player = 1;
    TacticSpec tactic;
    bool operator==(const MoveSpec&) const = default;
};

struct InitialSpec {
    enum class Kind { mixture, product };
    Kind kind = Kind::mixture;
    // mixture: weighted joint basis projectors
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> terms;
    // product: one normalized ket per player
    std::vector<std::vector<cx>> kets;
    bool operator==(const InitialSpec&) const = default;
};

struct GameSpecDoc {
    std::size_t m1 = 2, m2 = 2;
    PayoffMatrix payoff;
    InitialSpec initial;
    std::vector<MoveSpec> moves;

    bool operator==(const GameSpecDoc& o) const {
        return m1 == o.m1 && m2 == o.m2 && payoff.entries == o.payoff.entries &&
               initial == o.initial && moves == o.moves;
    }
};

// -- parsing -----------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key()))
            throw SpecSchemaError("unknown key \"" + it.key() + "\"", path + "." + it.key());
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw SpecSchemaError("missing required field", path + "." + key);
    return obj.at(key);
}

inline double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SpecSchemaError("expected a number", path);
    return v.get<double>();
}

// Amplitude: either a plain real number or a [re, im] pair.
inline cx as_amplitude(const json& v, const std::string& path) {
    if (v.is_number()) return cx{v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cx{v[0].get<double>(), v[1].get<double>()};
    throw SpecSchemaError("expected a real number or [re, im] pair", path);
}

inline Matrix as_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw SpecSchemaError("expected a matrix (array of rows)", path);
    std::size_t rows = v.size();
    std::size_t cols = 0;
    std::vector<cx> entries;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = v[i];
        std::string rpath = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) throw SpecSchemaError("expected a matrix row", rpath);
        if (i == 0)
            cols = row.size();
        else if (row.size() != cols)
            throw SpecSchemaError("ragged matrix rows", rpath);
        for (std::size_t j = 0; j < cols; ++j)
            entries.push_back(as_amplitude(row[j], rpath + "[" + std::to_string(j) + "]"));
    }
    return Matrix(rows, cols, std::move(entries));
}

inline TacticSpec parse_tactic(const json& v, const std::string& path, bool allow_mixture);

inline TacticSpec parse_tactic(const json& v, const std::string& path, bool allow_mixture) {
    TacticSpec t;
    if (v.is_string()) {
        t.kind = TacticSpec::Kind::named;
        t.name = v.get<std::string>();
        if (t.name != "hadamard" && t.name != "negation" && t.name != "identity" &&
            t.name != "dft")
            throw SpecSchemaError("unknown tactic name \"" + t.name + "\"", path);
        return t;
    }
    if (!v.is_object()) throw SpecSchemaError("tactic must be a name or an object", path);
    if (v.contains("matrix")) {
        reject_unknown_keys(v, {"matrix"}, path);
        t.kind = TacticSpec::Kind::matrix;
        t.matrix = as_matrix(v.at("matrix"), path + ".matrix");
        return t;
    }
    if (v.contains("mixture")) {
        if (!allow_mixture) throw SpecSchemaError("mixtures cannot be nested", path + ".mixture");
        reject_unknown_keys(v, {"mixture"}, path);
        const json& mix = v.at("mixture");
        if (!mix.is_array() || mix.empty())
            throw SpecSchemaError("mixture must be a non-empty array", path + ".mixture");
        t.kind = TacticSpec::Kind::mixture;
        for (std::size_t i = 0; i < mix.size(); ++i) {
            std::string bpath = path + ".mixture[" + std::to_string(i) + "]";
            const json& branch = mix[i];
            if (!branch.is_object()) throw SpecSchemaError("expected a mixture branch", bpath);
            reject_unknown_keys(branch, {"probability", "tactic"}, bpath);
            double prob = as_number(require(branch, "probability", bpath), bpath + ".probability");
            TacticSpec sub =
                parse_tactic(require(branch, "tactic", bpath), bpath + ".tactic", false);
            t.mixture.emplace_back(prob, std::move(sub));
        }
        return t;
    }
    throw SpecSchemaError("tactic object needs \"matrix\" or \"mixture\"", path);
}

}  // namespace detail

inline std::pair<std::size_t, std::size_t> line_column_of(const std::string& text,
                                                          std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline GameSpecDoc parse_game_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw SpecSyntaxError(std::string("JSON syntax error: ") + e.what(), line, col);
    }
    if (!doc.is_object()) throw SpecSchemaError("top level must be an object", "$");
    detail::reject_unknown_keys(doc, {"dims", "payoff", "initial", "moves"}, "$");

    GameSpecDoc out;

    const json& dims = detail::require(doc, "dims", "$");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_unsigned() ||
        !dims[1].is_number_unsigned())
        throw SpecSchemaError("dims must be [m1, m2] with positive integers", "$.dims");
    out.m1 = dims[0].get<std::size_t>();
    out.m2 = dims[1].get<std::size_t>();
    if (out.m1 < 2 || out.m2 < 2)
        throw SpecSemanticError("player strategy counts must be at least 2");

    Matrix pm = detail::as_matrix(detail::require(doc, "payoff", "$"), "$.payoff");
    if (pm.rows() != out.m1 || pm.cols() != out.m2)
        throw SpecSemanticError("payoff matrix shape does not match dims");
    std::vector<double> payoff_entries;
    for (std::size_t r = 0; r < out.m1; ++r)
        for (std::size_t s = 0; s < out.m2; ++s) {
            cx v = pm(r, s);
            if (v.imag() != 0.0) throw SpecSemanticError("payoff entries must be real dollars");
            payoff_entries.push_back(v.real());
        }
    out.payoff = PayoffMatrix(out.m1, out.m2, std::move(payoff_entries));

    const json& init = detail::require(doc, "initial", "$");
    if (!init.is_object()) throw SpecSchemaError("initial must be an object", "$.initial");
    std::string kind = detail::require(init, "kind", "$.initial").get<std::string>();
    if (kind == "mixture") {
        detail::reject_unknown_keys(init, {"kind", "terms"}, "$.initial");
        out.initial.kind = InitialSpec::Kind::mixture;
        const json& terms = detail::require(init, "terms", "$.initial");
        if (!terms.is_array() || terms.empty())
            throw SpecSchemaError("terms must be a non-empty array", "$.initial.terms");
        double total = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::string tpath = "$.initial.terms[" + std::to_string(i) + "]";
            const json& term = terms[i];
            if (!term.is_object()) throw SpecSchemaError("expected a mixture term", tpath);
            detail::reject_unknown_keys(term, {"weight", "basis"}, tpath);
            double weight = detail::as_number(detail::require(term, "weight", tpath),
                                              tpath + ".weight");
            const json& basis = detail::require(term, "basis", tpath);
            if (!basis.is_array() || basis.size() != 2 || !basis[0].is_number_unsigned() ||
                !basis[1].is_number_unsigned())
                throw SpecSchemaError("basis must be [r, s]", tpath + ".basis");
            std::size_t r = basis[0].get<std::size_t>(), s = basis[1].get<std::size_t>();
            if (r >= out.m1 || s >= out.m2)
                throw SpecSemanticError("initial basis index out of range");
            if (!(weight >= 0.0 && weight <= 1.0))
                throw SpecSemanticError("initial weight outside [0,1]");
            total += weight;
            out.initial.terms.emplace_back(weight, std::make_pair(r, s));
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw SpecSemanticError("initial weights do not sum to 1");
    } else if (kind == "product") {
        detail::reject_unknown_keys(init, {"kind", "kets"}, "$.initial");
        out.initial.kind = InitialSpec::Kind::product;
        const json& kets = detail::require(init, "kets", "$.initial");
        if (!kets.is_array() || kets.size() != 2)
            throw SpecSchemaError("kets must hold one amplitude list per player",
                                  "$.initial.kets");
        for (std::size_t pl = 0; pl < 2; ++pl) {
            std::string kpath = "$.initial.kets[" + std::to_string(pl) + "]";
            const json& kv = kets[pl];
            if (!kv.is_array() || kv.empty()) throw SpecSchemaError("expected amplitudes", kpath);
            std::vector<cx> amp;
            for (std::size_t i = 0; i < kv.size(); ++i)
                amp.push_back(detail::as_amplitude(kv[i], kpath + "[" + std::to_string(i) + "]"));
            std::size_t want = (pl == 0) ? out.m1 : out.m2;
            if (amp.size() != want)
                throw SpecSemanticError("ket dimension does not match player space");
            if (std::abs(Ket(amp).norm() - 1.0) > 1e-9)
                throw SpecSemanticError("initial ket is not normalized");
            out.initial.kets.push_back(std::move(amp));
        }
    } else {
        throw SpecSchemaError("initial.kind must be \"mixture\" or \"product\"",
                              "$.initial.kind");
    }

    const json& moves = detail::require(doc, "moves", "$");
    if (!moves.is_array()) throw SpecSchemaError("moves must be an array", "$.moves");
    for (std::size_t i = 0; i < moves.size(); ++i) {
        std::string mpath = "$.moves[" + std::to_string(i) + "]";
        const json& mv = moves[i];
        if (!mv.is_object()) throw SpecSchemaError("expected a move object", mpath);
        detail::reject_unknown_keys(mv, {"player", "tactic"}, mpath);
        const json& player = detail::require(mv, "player", mpath);
        if (!player.is_number_integer()) throw SpecSchemaError("player must be 1 or 2", mpath);
        MoveSpec move;
        move.player = player.get<int>();
        if (move.player != 1 && move.player != 2)
            throw SpecSemanticError("move player must be 1 or 2");
        move.tactic = detail::parse_tactic(detail::require(mv, "tactic", mpath),
                                           mpath + ".tactic", true);
        out.moves.push_back(std::move(move));
    }

    // Semantic validation of tactic matrices and mixture probabilities is
    // done against the target player's dimension.
    for (const MoveSpec& move : out.moves) {
        std::size_t d = (move.player == 1) ? out.m1 : out.m2;
        auto check_leaf = [&](const TacticSpec& t) {
            if (t.kind == TacticSpec::Kind::matrix) {
                if (t.matrix.rows() != d || t.matrix.cols() != d)
                    throw SpecSemanticError("tactic matrix does not match player space");
                if (!is_unitary(t.matrix, 1e-9))
                    throw SpecSemanticError("non-unitary tactic");
            }
        };
        if (move.tactic.kind == TacticSpec::Kind::mixture) {
            double total = 0.0;
            for (const auto& [p, sub] : move.tactic.mixture) {
                if (!(p >= 0.0 && p <= 1.0))
                    throw SpecSemanticError("mixture probability outside [0,1]");
                total += p;
                check_leaf(sub);
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw SpecSemanticError("mixture probabilities do not sum to 1");
        } else {
            check_leaf(move.tactic);
        }
    }
    return out;
}

// -- serialization -----------------------------------------------------------

namespace detail {

inline json amplitude_to_json(cx v) {
    if (v.imag() == 0.0) return v.real();
    return json::array({v.real(), v.imag()});
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(amplitude_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json tactic_to_json(const TacticSpec& t) {
    switch (t.kind) {
        case TacticSpec::Kind::named:
            return t.name;
        case TacticSpec::Kind::matrix:
            return json{{"matrix", matrix_to_json(t.matrix)}};
        case TacticSpec::Kind::mixture: {
            json branches = json::array();
            for (const auto& [p, sub] : t.mixture)
                branches.push_back(json{{"probability", p}, {"tactic", tactic_to_json(sub)}});
            return json{{"mixture", std::move(branches)}};
        }
    }
    return nullptr;
}

}  // namespace detail

inline json game_spec_to_json(const GameSpecDoc& doc) {
    json j;
    j["dims"] = {doc.m1, doc.m2};
    json payoff = json::array();
    for (std::size_t r = 0; r < doc.m1; ++r) {
        json row = json::array();
        for (std::size_t s = 0; s < doc.m2; ++s) row.push_back(doc.payoff.at(r, s));
        payoff.push_back(std::move(row));
    }
    j["payoff"] = std::move(payoff);
    if (doc.initial.kind == InitialSpec::Kind::mixture) {
        json terms = json::array();
        for (const auto& [weight, basis] : doc.initial.terms)
            terms.push_back(json{{"weight", weight}, {"basis", {basis.first, basis.second}}});
        j["initial"] = {{"kind", "mixture"}, {"terms", std::move(terms)}};
    } else {
        json kets = json::array();
        for (const auto& amp : doc.initial.kets) {
            json kv = json::array();
            for (cx v : amp) kv.push_back(detail::amplitude_to_json(v));
            kets.push_back(std::move(kv));
        }
        j["initial"] = {{"kind", "product"}, {"kets", std::move(kets)}};
    }
    json moves = json::array();
    for (const MoveSpec& m : doc.moves)
        moves.push_back(json{{"player", m.player}, {"tactic", detail::tactic_to_json(m.tactic)}});
    j["moves"] = std::move(moves);
    return j;
}

inline std::string serialize_game_spec(const GameSpecDoc& doc) {
    return game_spec_to_json(doc).dump(2) + "\n";
}

// -- execution ---------------------------------------------------------------

namespace detail {

inline Matrix resolve_named_tactic(const std::string& name, std::size_t dim) {
    if (name == "hadamard") {
        if (dim != 2) throw SpecSemanticError("hadamard tactic needs a 2-dimensional space");
        return hadamard();
    }
    if (name == "negation") {
        if (dim != 2) throw SpecSemanticError("negation tactic needs a 2-dimensional space");
        return negation();
    }
    if (name == "identity") return Matrix::identity(dim);
    if (name == "dft") return dft_matrix(dim);
    throw SpecSemanticError("unknown tactic name \"" + name + "\"");
}

}  // namespace detail

struct MoveSummary {
    std::string label;
    double trace;
    double purity;
    std::vector<double> diagonal;
};

struct RunReport {
    GameSpecDoc spec;
    std::vector<MoveSummary> moves;  // initial state first, then one per move
    double payoff = 0.0;
    bool checks_ok = true;
};

inline GameState build_initial_state(const GameSpecDoc& doc) {
    if (doc.initial.kind == InitialSpec::Kind::mixture) {
        Matrix rho(doc.m1 * doc.m2, doc.m1 * doc.m2);
        for (const auto& [weight, basis] : doc.initial.terms) {
            Ket joint = kron(Ket::basis(doc.m1, basis.first), Ket::basis(doc.m2, basis.second));
            rho = rho + weight * outer(joint, joint);
        }
        return GameState(doc.m1, doc.m2, std::move(rho));
    }
    return GameState::pure(Ket(doc.initial.kets[0]), Ket(doc.initial.kets[1]));
}

inline RunReport execute_spec(const GameSpecDoc& doc) {
    RunReport report;
    report.spec = doc;

    auto summarize = [](const std::string& label, const GameState& s) {
        MoveSummary ms{label, s.rho().trace().real(), s.purity(), {}};
        for (std::size_t k = 0; k < s.dim(); ++k) ms.diagonal.push_back(s.rho()(k, k).real());
        return ms;
    };

    GameState state = build_initial_state(doc);
    report.moves.push_back(summarize("initial", state));

    for (std::size_t i = 0; i < doc.moves.size(); ++i) {
        const MoveSpec& move = doc.moves[i];
        std::size_t d = (move.player == 1) ? doc.m1 : doc.m2;
        if (move.tactic.kind == TacticSpec::Kind::mixture) {
            MixedTactic t;
            t.player = move.player;
            for (const auto& [p, sub] : move.tactic.mixture) {
                Matrix u = (sub.kind == TacticSpec::Kind::named)
                               ? detail::resolve_named_tactic(sub.name, d)
                               : sub.matrix;
                t.branches.push_back({p, std::move(u)});
            }
            // Spec documents carry user-authored numbers; check them at the
            // document tolerance, not the structural one.
            state = apply_mixed_tactic(state, t, 1e-9, 1e-9);
        } else {
            Matrix u = (move.tactic.kind == TacticSpec::Kind::named)
                           ? detail::resolve_named_tactic(move.tactic.name, d)
                           : move.tactic.matrix;
            state = apply_pure_tactic(state, move.player, u, 1e-9);
        }
        report.moves.push_back(summarize("move " + std::to_string(i + 1), state));
    }

    report.payoff = expected_payoff(build_payoff_observable(doc.payoff), state);
    report.checks_ok = true;  // GameState validation would have thrown otherwise
    return report;
}

// -- landscape CSV -----------------------------------------------------------

inline std::string emit_landscape_csv(const std::vector<LandscapeSample>& samples) {
    std::string out = "chart,re,im,payoff_usd\n";
    for (const LandscapeSample& s : samples) {
        out += (s.chart == Chart::finite) ? "z" : "u";
        out += ',';
        out += format_coord(s.re);
        out += ',';
        out += format_coord(s.im);
        out += ',';
        out += format_dollars(s.payoff);
        out += '\n';
    }
    return out;
}

// Write to a temporary sibling and rename into place, so failures never
// leave a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open output file: " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) {
            f.close();
            std::filesystem::remove(tmp);
            throw ValidationError("failed writing output file: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace qgame
