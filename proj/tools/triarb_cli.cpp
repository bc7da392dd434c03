// Command-line front end for the triangular-arbitrage dynamics engine.
//
// Subcommands: rules, matrices, simulate, analyze, polytope, search,
// verify-paper. Exit codes: 0 success, 1 validation error, 2 verification
// failure, 3 budget exhaustion.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triarb/triarb.hpp"

namespace {

using namespace triarb;

std::vector<RuleTriple> parse_cycle_string(const std::string& text,
                                           Dimension d) {
    std::vector<RuleTriple> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.empty()) continue;
        std::stringstream ps(part);
        std::string tok;
        std::vector<int> vals;
        while (std::getline(ps, tok, ',')) vals.push_back(std::stoi(tok));
        if (vals.size() != 3)
            throw validation_error("rule '" + part + "' is not i,j,k");
        RuleTriple w{vals[0], vals[1], vals[2]};
        validate_rule(w, d);
        out.push_back(w);
    }
    if (out.empty()) throw validation_error("empty cycle string");
    return out;
}

int cmd_rules(int d_value) {
    Dimension d(d_value);
    for (const RuleTriple& w : enumerate_rules(d))
        std::cout << format_rule(w) << "\n";
    return 0;
}

int cmd_matrices(int d_value, const std::string& kind,
                 const std::optional<std::string>& rule_text,
                 const std::optional<std::string>& out_path) {
    Dimension d(d_value);
    std::optional<RuleTriple> rule;
    if (rule_text) {
        auto rules = parse_cycle_string(*rule_text, d);
        if (rules.size() != 1)
            throw validation_error("--rule takes a single i,j,k triple");
        rule = rules[0];
    }
    UpdateMatrix m = [&]() -> UpdateMatrix {
        bool needs_rule = kind == "B" || kind == "D" || kind == "G";
        if (needs_rule && !rule)
            throw validation_error("kind " + kind + " needs --rule i,j,k");
        if (!needs_rule && rule)
            throw validation_error("kind " + kind + " does not take a rule");
        if (kind == "B") return pair_update_matrix(*rule, d);
        if (kind == "D") return block_form(*rule, d).block;
        if (kind == "G") return block_form(*rule, d).reduced;
        if (kind == "Q") return change_of_basis(d);
        if (kind == "Qinv") return change_of_basis_inverse(d);
        if (kind == "P") return fixed_projector(d);
        throw validation_error("unknown matrix kind '" + kind + "'");
    }();
    json j = matrix_json(m);
    if (out_path) {
        std::ofstream os(*out_path);
        os << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& config_path) {
    RunConfig config = read_config(config_path);
    std::vector<Rat> x0 = initial_vector(config);
    std::uint64_t steps = config.sequence.expansion_length();
    Trajectory<Rat> t =
        iterate(x0, config.sequence, steps, config.mode, config.d);
    if (config.output.trajectory_csv)
        write_trajectory(t, std::filesystem::path(*config.output.trajectory_csv));
    else
        write_trajectory(t, std::cout);
    if (config.output.report_json) {
        json report{{"d", config.d.value()},
                    {"mode", mode_name(config.mode)},
                    {"steps", steps},
                    {"final_sup_norm", to_decimal(t.norms.back())}};
        if (config.mode != IterKind::Reduced) {
            LogRateVector<Rat> fin(config.d, t.points.back());
            report["final_log_accumulative"] =
                to_decimal(log_accumulative_nac(fin));
            // The rate-space report exponentiates; skip it once the log
            // rates leave double range.
            if (sup_norm(fin.coords) < 700)
                report["final_nac"] = nac_report_json(nac_report(exp_rates(fin)));
        }
        std::ofstream os(*config.output.report_json);
        os << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_analyze(int d_value, const std::string& kind_text,
                const std::string& cycle_text,
                const std::optional<std::string>& out_path) {
    Dimension d(d_value);
    IterKind kind;
    if (kind_text == "B")
        kind = IterKind::PairBasis;
    else if (kind_text == "G")
        kind = IterKind::Reduced;
    else
        throw validation_error("--kind must be B or G");
    std::vector<RuleTriple> cycle = parse_cycle_string(cycle_text, d);
    CycleAnalysis analysis = verify_cycle(cycle, d, kind);
    json j = cycle_analysis_json(analysis);
    if (out_path) {
        std::ofstream os(*out_path);
        os << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_polytope(bool check, const std::optional<std::string>& out_path) {
    InvariantPolytope body = certificate_polytope();
    json j = polytope_json(body);
    int code = 0;
    if (check) {
        Dimension d(4);
        std::vector<IntMat> mats;
        for (const RuleTriple& w : enumerate_rules(d))
            mats.push_back(reduced_matrix(w, d).mat);
        InvarianceReport report = check_invariance(body, mats);
        j["invariance"] = {{"pass", report.pass},
                           {"witness", to_decimal(report.witness)}};
        json violations = json::array();
        for (const auto& v : report.violations) {
            json image = json::array();
            for (const Int& c : v.image) image.push_back(to_decimal(c));
            violations.push_back({{"matrix", v.matrix_index},
                                  {"vertex", v.vertex_index},
                                  {"image", std::move(image)}});
        }
        j["invariance"]["violations"] = std::move(violations);
        if (!report.pass) code = 2;
    }
    if (out_path) {
        std::ofstream os(*out_path);
        os << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return code;
}

int cmd_search(const std::string& config_path,
               const std::optional<std::string>& out_path) {
    SearchConfig config = read_search_config(config_path);
    std::vector<CycleAnalysis> hits = enumerate_unstable(config);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out_path) {
        file.open(*out_path);
        os = &file;
    }
    for (const CycleAnalysis& hit : hits)
        *os << cycle_analysis_json(hit).dump() << "\n";
    return 0;
}

int cmd_verify() {
    auto results = verify::run_all();
    bool ok = verify::report(results, std::cout);
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for triangular-arbitrage dynamics"};
    app.require_subcommand(1);

    int d_value = 4;
    std::string kind, cycle_text, config_path;
    std::optional<std::string> rule_text, out_path;
    bool polytope_check = false;

    auto* rules = app.add_subcommand("rules", "list the canonical rules");
    rules->add_option("--d", d_value, "number of currencies")->required();

    auto* matrices =
        app.add_subcommand("matrices", "emit a factory matrix as JSON");
    matrices->add_option("--d", d_value)->required();
    matrices->add_option("--kind", kind, "B|D|G|Q|Qinv|P")->required();
    matrices->add_option("--rule", rule_text, "rule i,j,k for B|D|G");
    matrices->add_option("--out", out_path, "write to file instead of stdout");

    auto* simulate =
        app.add_subcommand("simulate", "run a configured trajectory");
    simulate->add_option("--config", config_path, "JSON run config")
        ->required();

    auto* analyze = app.add_subcommand("analyze", "analyze one rule cycle");
    analyze->add_option("--d", d_value)->required();
    analyze->add_option("--kind", kind, "B or G")->required();
    analyze->add_option("--cycle", cycle_text, "semicolon-separated i,j,k")
        ->required();
    analyze->add_option("--out", out_path);

    auto* polytope =
        app.add_subcommand("polytope", "export the d=4 certificate body");
    polytope->add_flag("--check", polytope_check,
                       "also verify invariance under all reduced matrices");
    polytope->add_option("--out", out_path);

    auto* search = app.add_subcommand("search", "search rule cycles");
    search->add_option("--config", config_path, "JSON search config")
        ->required();
    search->add_option("--out", out_path, "write JSON lines to file");

    app.add_subcommand("verify-paper",
                       "run the built-in reproduction suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rules->parsed()) return cmd_rules(d_value);
        if (matrices->parsed())
            return cmd_matrices(d_value, kind, rule_text, out_path);
        if (simulate->parsed()) return cmd_simulate(config_path);
        if (analyze->parsed())
            return cmd_analyze(d_value, kind, cycle_text, out_path);
        if (polytope->parsed()) return cmd_polytope(polytope_check, out_path);
        if (search->parsed()) return cmd_search(config_path, out_path);
        return cmd_verify();
    } catch (const triarb::budget_error& e) {
        std::cerr << "budget error: " << e.what() << " (done " << e.done
                  << " of cap " << e.cap << ")\n";
        return 3;
    } catch (const triarb::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
