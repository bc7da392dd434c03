#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "triarb/detail/rng.hpp"
#include "triarb/dynamics.hpp"
#include "triarb/metrics.hpp"
#include "triarb/polytope.hpp"
#include "triarb/search.hpp"

namespace triarb {

using nlohmann::json;

inline std::string to_decimal(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON exports

inline json matrix_json(const UpdateMatrix& m) {
    json rows = json::array();
    bool fits_long = true;
    for (int r = 0; r < m.mat.rows() && fits_long; ++r)
        for (int c = 0; c < m.mat.cols(); ++c)
            if (!m.mat.at(r, c).fits_slong_p()) {
                fits_long = false;
                break;
            }
    for (int r = 0; r < m.mat.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.mat.cols(); ++c) {
            if (fits_long)
                row.push_back(m.mat.at(r, c).get_si());
            else
                row.push_back(to_decimal(m.mat.at(r, c)));
        }
        rows.push_back(std::move(row));
    }
    json out;
    out["d"] = m.d.value();
    out["kind"] = to_tag(m.kind);
    if (m.rule)
        out["rule"] = {m.rule->i, m.rule->j, m.rule->k};
    else
        out["rule"] = nullptr;
    out["rows"] = std::move(rows);
    return out;
}

inline json growth_json(const GrowthClass& g) {
    json out;
    out["log_space"] = to_string(g.log_space);
    out["rate_space"] = to_string(g.rate_space);
    switch (g.log_space) {
        case GrowthClass::LogSpace::Periodic: out["period"] = g.period; break;
        case GrowthClass::LogSpace::Polynomial: out["degree"] = g.degree; break;
        case GrowthClass::LogSpace::Exponential: out["rate"] = g.rate; break;
        case GrowthClass::LogSpace::Uncertain: {
            out["fit_r2"] = g.fit_r2;
            json pts = json::array();
            for (auto [x, y] : g.fit_points) pts.push_back({x, y});
            out["fit_points"] = std::move(pts);
            break;
        }
    }
    return out;
}

inline json cycle_analysis_json(const CycleAnalysis& a) {
    json out;
    out["d"] = a.d.value();
    out["kind"] = a.kind == IterKind::Reduced ? "G" : "B";
    json cyc = json::array();
    for (const RuleTriple& w : a.cycle) cyc.push_back({w.i, w.j, w.k});
    out["cycle"] = std::move(cyc);
    out["length"] = a.cycle.size();
    json rows = json::array();
    for (int r = 0; r < a.product.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < a.product.cols(); ++c)
            row.push_back(to_decimal(a.product.at(r, c)));
        rows.push_back(std::move(row));
    }
    out["product_rows"] = std::move(rows);
    // ascending powers, constant term first, as decimal strings
    json poly = json::array();
    for (const Int& c : a.char_poly) poly.push_back(to_decimal(c));
    out["char_poly"] = std::move(poly);
    json eig = json::array();
    for (const auto& z : a.eigenvalues)
        eig.push_back({{"re", z.real()},
                       {"im", z.imag()},
                       {"modulus", std::abs(z)}});
    out["eigenvalues"] = std::move(eig);
    out["spectral_radius"] = a.spectral_radius;
    out["max_residual"] = a.max_residual;
    out["growth"] = growth_json(a.growth);
    return out;
}

inline json polytope_json(const InvariantPolytope& body) {
    json verts = json::array();
    for (const auto& v : body.vertices) {
        json row = json::array();
        for (const Int& c : v) row.push_back(c.get_si());
        verts.push_back(std::move(row));
    }
    json facets = json::array();
    for (const Facet& f : body.facets) {
        json normal = json::array();
        for (const Int& c : f.normal) normal.push_back(to_decimal(c));
        facets.push_back({{"normal", std::move(normal)},
                          {"offset", to_decimal(f.offset)}});
    }
    return {{"vertices", std::move(verts)}, {"facets", std::move(facets)}};
}

inline json nac_report_json(const NacReport& r) {
    json factors = json::object();
    for (const auto& [pair, value] : r.factors)
        factors[std::to_string(pair.i) + "," + std::to_string(pair.j)] = value;
    return {{"factors", std::move(factors)},
            {"accumulative", r.accumulative}};
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    Dimension d{4};
    IterKind mode = IterKind::MaxRule;
    struct Initial {
        enum class Kind { BasisPair, Explicit, Random } kind = Kind::Random;
        PairIndex pair;              // BasisPair
        std::vector<Rat> coords;     // Explicit
        std::uint64_t seed = 0;      // Random
    } initial;
    RuleSequence sequence;
    struct Output {
        std::optional<std::string> trajectory_csv;
        std::optional<std::string> report_json;
    } output;
};

namespace detail {

inline const json& require_field(const json& j, const char* field,
                                 const char* where) {
    auto it = j.find(field);
    if (it == j.end())
        throw config_error(std::string("config field '") + where +
                           "' is missing");
    return *it;
}

template <class T>
T field_as(const json& j, const char* field, const char* where) {
    try {
        return require_field(j, field, where).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("config field '") + where +
                           "' has the wrong type");
    }
}

}  // namespace detail

inline IterKind parse_mode(const std::string& mode) {
    if (mode == "max") return IterKind::MaxRule;
    if (mode == "linear-B") return IterKind::PairBasis;
    if (mode == "linear-G") return IterKind::Reduced;
    throw config_error("config field 'mode' must be max, linear-B or linear-G");
}

inline const char* mode_name(IterKind kind) {
    switch (kind) {
        case IterKind::MaxRule: return "max";
        case IterKind::PairBasis: return "linear-B";
        case IterKind::Reduced: return "linear-G";
    }
    return "?";
}

inline RunConfig parse_config(const json& j) {
    using detail::field_as;
    RunConfig out;
    out.d = Dimension(field_as<int>(j, "d", "d"));
    out.mode = parse_mode(field_as<std::string>(j, "mode", "mode"));

    const json& init = detail::require_field(j, "initial", "initial");
    std::string kind = field_as<std::string>(init, "kind", "initial.kind");
    if (kind == "basis") {
        out.initial.kind = RunConfig::Initial::Kind::BasisPair;
        auto pair = field_as<std::vector<int>>(init, "pair", "initial.pair");
        if (pair.size() != 2)
            throw config_error("config field 'initial.pair' needs two indices");
        out.initial.pair = {pair[0], pair[1]};
    } else if (kind == "explicit") {
        out.initial.kind = RunConfig::Initial::Kind::Explicit;
        const json& coords =
            detail::require_field(init, "coords", "initial.coords");
        if (!coords.is_array())
            throw config_error("config field 'initial.coords' must be an array");
        for (const json& c : coords) {
            if (c.is_number_integer())
                out.initial.coords.emplace_back(c.get<long>());
            else if (c.is_string())
                out.initial.coords.push_back(
                    parse_rational(c.get<std::string>()));
            else
                throw config_error(
                    "config field 'initial.coords' entries must be integers "
                    "or 'p/q' strings");
        }
    } else if (kind == "random") {
        out.initial.kind = RunConfig::Initial::Kind::Random;
        out.initial.seed =
            field_as<std::uint64_t>(init, "seed", "initial.seed");
    } else {
        throw config_error(
            "config field 'initial.kind' must be basis, explicit or random");
    }

    const json& seq = detail::require_field(j, "sequence", "sequence");
    auto rule_rows = detail::field_as<std::vector<std::vector<int>>>(
        seq, "rules", "sequence.rules");
    if (rule_rows.empty())
        throw config_error("config field 'sequence.rules' must be non-empty");
    for (const auto& row : rule_rows) {
        if (row.size() != 3)
            throw config_error(
                "config field 'sequence.rules' entries must be [i, j, k]");
        RuleTriple w{row[0], row[1], row[2]};
        validate_rule(w, out.d);
        out.sequence.base.push_back(w);
    }
    out.sequence.repeats =
        detail::field_as<std::uint64_t>(seq, "repeats", "sequence.repeats");
    if (out.sequence.repeats == 0)
        throw config_error("config field 'sequence.repeats' must be positive");

    if (auto it = j.find("output"); it != j.end()) {
        if (it->contains("trajectory_csv"))
            out.output.trajectory_csv =
                detail::field_as<std::string>(*it, "trajectory_csv",
                                              "output.trajectory_csv");
        if (it->contains("report_json"))
            out.output.report_json = detail::field_as<std::string>(
                *it, "report_json", "output.report_json");
    }

    // Validate the initial state shape eagerly so errors surface before any
    // computation starts.
    const int want = state_size(out.mode, out.d);
    if (out.initial.kind == RunConfig::Initial::Kind::Explicit &&
        static_cast<int>(out.initial.coords.size()) != want)
        throw config_error("config field 'initial.coords' needs " +
                           std::to_string(want) + " entries for this mode");
    if (out.initial.kind == RunConfig::Initial::Kind::BasisPair) {
        if (out.mode == IterKind::Reduced)
            reduced_index_of(out.initial.pair.i, out.initial.pair.j, out.d);
        else
            index_of(out.initial.pair.i, out.initial.pair.j, out.d);
    }
    return out;
}

inline RunConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") +
                           e.what());
    }
    return parse_config(j);
}

/// Normalized JSON form; parse_config(config_json(c)) round-trips.
inline json config_json(const RunConfig& c) {
    json init;
    switch (c.initial.kind) {
        case RunConfig::Initial::Kind::BasisPair:
            init = {{"kind", "basis"},
                    {"pair", {c.initial.pair.i, c.initial.pair.j}}};
            break;
        case RunConfig::Initial::Kind::Explicit: {
            json coords = json::array();
            for (const Rat& v : c.initial.coords)
                coords.push_back(to_decimal(v));
            init = {{"kind", "explicit"}, {"coords", std::move(coords)}};
            break;
        }
        case RunConfig::Initial::Kind::Random:
            init = {{"kind", "random"}, {"seed", c.initial.seed}};
            break;
    }
    json rules = json::array();
    for (const RuleTriple& w : c.sequence.base)
        rules.push_back({w.i, w.j, w.k});
    json out{{"d", c.d.value()},
             {"mode", mode_name(c.mode)},
             {"initial", std::move(init)},
             {"sequence",
              {{"rules", std::move(rules)}, {"repeats", c.sequence.repeats}}}};
    json output = json::object();
    if (c.output.trajectory_csv)
        output["trajectory_csv"] = *c.output.trajectory_csv;
    if (c.output.report_json) output["report_json"] = *c.output.report_json;
    out["output"] = std::move(output);
    return out;
}

/// Resolves the configured initial state to concrete exact coordinates.
/// Random coordinates are integers in [-9, 9] drawn from the documented
/// SplitMix64 stream in coordinate order.
inline std::vector<Rat> initial_vector(const RunConfig& c) {
    const int want = state_size(c.mode, c.d);
    switch (c.initial.kind) {
        case RunConfig::Initial::Kind::Explicit: return c.initial.coords;
        case RunConfig::Initial::Kind::BasisPair: {
            std::vector<Rat> x(want, Rat(0));
            int at = c.mode == IterKind::Reduced
                         ? reduced_index_of(c.initial.pair.i,
                                            c.initial.pair.j, c.d)
                         : index_of(c.initial.pair.i, c.initial.pair.j, c.d);
            x[at] = 1;
            return x;
        }
        case RunConfig::Initial::Kind::Random: {
            detail::SplitMix64 rng(c.initial.seed);
            std::vector<Rat> x(want);
            for (int t = 0; t < want; ++t) x[t] = rng.small_int();
            return x;
        }
    }
    throw config_error("unreachable initial kind");
}

// ---------------------------------------------------------------------------
// Trajectory CSV

namespace detail {

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// Columns: step,rule,x_<i>_<j>...,sup_norm. Exact values print as decimal
/// integers or "p/q"; the rule cell holds "i,j,k" (quoted) and is empty on
/// the step-0 row.
template <class S>
void write_trajectory(const Trajectory<S>& t, std::ostream& os) {
    os << "step,rule";
    const int n = state_size(t.kind, t.d);
    for (int idx = 0; idx < n; ++idx) {
        PairIndex p = t.kind == IterKind::Reduced ? reduced_pair_of(idx, t.d)
                                                  : pair_of(idx, t.d);
        os << ",x_" << p.i << "_" << p.j;
    }
    os << ",sup_norm\n";
    for (size_t step = 0; step < t.points.size(); ++step) {
        os << step << ",";
        if (step > 0) os << detail::csv_quote(format_rule(t.applied[step - 1]));
        for (const S& v : t.points[step]) os << "," << to_decimal(v);
        os << "," << to_decimal(t.norms[step]) << "\n";
    }
}

template <class S>
void write_trajectory(const Trajectory<S>& t,
                      const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os)
        throw validation_error("cannot open " + path.string() +
                               " for writing");
    write_trajectory(t, os);
}

// ---------------------------------------------------------------------------
// Search configuration

inline SearchConfig parse_search_config(const json& j) {
    using detail::field_as;
    SearchConfig out;
    out.d = Dimension(field_as<int>(j, "d", "d"));
    std::string kind = field_as<std::string>(j, "kind", "kind");
    if (kind == "B")
        out.kind = IterKind::PairBasis;
    else if (kind == "G")
        out.kind = IterKind::Reduced;
    else
        throw config_error("config field 'kind' must be B or G");
    out.max_length = field_as<int>(j, "max_length", "max_length");
    std::string mode = field_as<std::string>(j, "mode", "mode");
    if (mode == "exhaustive")
        out.mode = SearchConfig::Mode::Exhaustive;
    else if (mode == "random")
        out.mode = SearchConfig::Mode::Random;
    else
        throw config_error("config field 'mode' must be exhaustive or random");
    if (j.contains("sample_budget"))
        out.sample_budget =
            field_as<std::uint64_t>(j, "sample_budget", "sample_budget");
    if (j.contains("seed"))
        out.seed = field_as<std::uint64_t>(j, "seed", "seed");
    if (j.contains("rho_threshold"))
        out.rho_threshold =
            field_as<double>(j, "rho_threshold", "rho_threshold");
    if (j.contains("work_cap"))
        out.work_cap = field_as<std::uint64_t>(j, "work_cap", "work_cap");
    if (j.contains("threads"))
        out.threads = field_as<int>(j, "threads", "threads");
    return out;
}

inline SearchConfig read_search_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") +
                           e.what());
    }
    return parse_search_config(j);
}

}  // namespace triarb
