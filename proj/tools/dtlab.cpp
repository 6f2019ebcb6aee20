// dtlab command-line front end: generation, solving, analysis, verification,
// profiling, classification and reachability checks over decision tables.
//
// Every subcommand prints exactly one JSON document (or CSV for `profile
// --csv -`) on stdout; human-readable diagnostics go to stderr. Exit codes:
// 0 success, 1 verification/assertion failure, 2 input error, 3 resource
// limit.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dtlab/dtlab.hpp"

namespace {

using namespace dtlab;

decision_table load_table(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::parse_error, "cannot open table file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return table_from_string(buf.str());
}

decision_tree load_tree(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::parse_error, "cannot open tree file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return tree_from_string(buf.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), errc::parse_error, "cannot write file " + path);
    out << content;
}

void emit(const njson& doc) { std::cout << doc.dump() << "\n"; }

attribute_family family_from_flags(const std::string& name, std::optional<long long> bound,
                                   const std::string& params_path) {
    if (params_path.empty()) return builtin_family(name, bound);
    // custom geometry: {"points":[[x,y],...],"lines":[[a,b,c],...]} with
    // rationals as "p/q" strings or integers, or {"values":[[..]],
    // "thresholds":[[feature,offset],...]}, or {"matrix":[[0,1,...],...]}
    std::ifstream in(params_path);
    require(in.good(), errc::parse_error, "cannot open params file " + params_path);
    njson j = njson::parse(in, nullptr, false);
    require(!j.is_discarded(), errc::parse_error, "invalid JSON in " + params_path);

    auto as_rational = [](const njson& v) -> rational {
        if (v.is_number_integer()) return rational(v.get<long long>());
        require(v.is_string(), errc::parse_error, "rationals must be integers or \"p/q\" strings");
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return rational(std::stoll(s));
        return rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    };

    family_kind kind = family_kind_from_name(name);
    if (kind == family_kind::half_plane) {
        half_plane_params p;
        for (const auto& pt : j.at("points"))
            p.points.push_back({as_rational(pt.at(0)), as_rational(pt.at(1))});
        for (const auto& ln : j.at("lines"))
            p.lines.push_back({as_rational(ln.at(0)), as_rational(ln.at(1)), as_rational(ln.at(2))});
        return attribute_family::half_plane(std::move(p));
    }
    if (kind == family_kind::feature_threshold) {
        feature_threshold_params p;
        for (const auto& row : j.at("values")) {
            std::vector<rational> vals;
            for (const auto& v : row) vals.push_back(as_rational(v));
            p.values.push_back(std::move(vals));
        }
        for (const auto& th : j.at("thresholds"))
            p.thresholds.push_back({th.at(0).get<int>(), as_rational(th.at(1))});
        return attribute_family::feature_threshold(std::move(p));
    }
    if (kind == family_kind::custom) {
        custom_params p;
        for (const auto& row : j.at("matrix")) {
            tuple_t r;
            for (const auto& v : row) r.push_back(static_cast<std::uint8_t>(v.get<int>() != 0));
            p.matrix.push_back(std::move(r));
        }
        return attribute_family::custom(std::move(p));
    }
    raise(errc::parse_error, "--params only applies to halfplane/feature/custom families");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact decision-tree synthesis and complexity analysis"};
    app.require_subcommand(1);

    std::string family_name, table_path, tree_path, out_path, dot_path, csv_path, mode,
        kind_name, labeling_name = "injective", params_path;
    int n = 1, n_max = 4, budget = 0;
    std::optional<long long> bound;
    std::optional<int> max_nodes, max_depth;
    bool reduction_all = false, force = false, no_confirm = false;

    auto* gen = app.add_subcommand("gen", "generate a decision table from a family");
    gen->add_option("--family", family_name, "u1|u2|u3|halfplane|feature|custom")->required();
    gen->add_option("--n", n, "attribute count")->required();
    gen->add_option("--bound", bound, "universe bound for u1/u2");
    gen->add_option("--labeling", labeling_name, "injective|constant");
    gen->add_option("--params", params_path, "JSON parameters for halfplane/feature/custom");
    gen->add_option("-o,--out", out_path, "write the dtable-v1 file here");

    auto* solve = app.add_subcommand("solve", "optimize a tree for a table");
    solve->add_option("--table", table_path)->required();
    solve
        ->add_option("--mode", mode,
                     "det-depth|det-nodes|det-nodes-budget|nondet-depth|nondet-nodes|reduction-tree")
        ->required();
    solve->add_option("--budget", budget, "depth budget for det-nodes-budget");
    solve->add_option("-o,--out", out_path, "write the witness dtree-v1 file here");
    solve->add_option("--dot", dot_path, "write the witness as DOT here");

    auto* analyze_cmd = app.add_subcommand("analyze", "structural parameters of a table");
    analyze_cmd->add_option("--table", table_path)->required();
    analyze_cmd->add_flag_callback(
        "--reduction-all", [&] { reduction_all = true; },
        "also scan all partial assignments (small n only)");
    analyze_cmd->add_option("--reduction", mode, "rows|all (alias of --reduction-all)");

    auto* verify = app.add_subcommand("verify", "check a tree against a table");
    verify->add_option("--table", table_path)->required();
    verify->add_option("--tree", tree_path)->required();
    verify->add_option("--mode", mode, "det|nondet")->required();

    auto* profile = app.add_subcommand("profile", "worst-case profile of a family");
    profile->add_option("--family", family_name)->required();
    profile->add_option("--n-max", n_max)->required();
    profile->add_option("--params", params_path, "JSON parameters for halfplane/feature/custom");
    profile->add_option("--csv", csv_path, "write the profile CSV here");
    profile->add_flag("--no-confirm", no_confirm, "skip the bounded worst-selection search");

    auto* classify_cmd = app.add_subcommand("classify", "fit a family's local type");
    classify_cmd->add_option("--family", family_name)->required();
    classify_cmd->add_option("--n-max", n_max)->required();
    classify_cmd->add_option("--params", params_path);
    classify_cmd->add_flag("--no-confirm", no_confirm);

    auto* reach = app.add_subcommand("reach", "ld/la-reachability at one scale");
    reach->add_option("--family", family_name)->required();
    reach->add_option("--n", n)->required();
    reach->add_option("--kind", kind_name, "ld|la")->required();
    reach->add_option("--params", params_path);

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference minima");
    oracle_cmd->add_option("--table", table_path)->required();
    oracle_cmd->add_option("--max-nodes", max_nodes);
    oracle_cmd->add_option("--max-depth", max_depth);
    oracle_cmd->add_flag("--force", force, "override the small-table preconditions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*gen) {
            labeling lab = labeling::injective();
            if (labeling_name == "constant") lab = labeling::constant();
            else
                require(labeling_name == "injective", errc::parse_error,
                        "unknown labeling \"" + labeling_name + "\"");
            attribute_family fam = family_from_flags(family_name, bound, params_path);
            // custom families have no canonical worst selection; take 1..n
            std::vector<int> selection;
            if (fam.kind() == family_kind::custom) {
                selection.resize(static_cast<std::size_t>(n));
                std::iota(selection.begin(), selection.end(), 1);
            } else {
                selection = canonical_worst_selection(fam, n);
            }
            decision_table t = generate(fam, selection, lab);
            njson doc = table_to_json(t);
            if (!out_path.empty()) write_file(out_path, doc.dump() + "\n");
            emit(doc);
        } else if (*solve) {
            decision_table t = load_table(table_path);
            solve_result res;
            if (mode == "det-depth") res = min_depth_det(t);
            else if (mode == "det-nodes") res = min_nodes_det(t);
            else if (mode == "det-nodes-budget") res = min_nodes_det_budgeted(t, budget);
            else if (mode == "nondet-depth") res = min_depth_nondet(t);
            else if (mode == "nondet-nodes") res = min_nodes_nondet(t);
            else if (mode == "reduction-tree") res = build_reduction_tree(t);
            else
                raise(errc::parse_error, "unknown solve mode \"" + mode + "\"");
            if (res.tree) {
                if (!out_path.empty()) write_file(out_path, tree_to_json(*res.tree).dump() + "\n");
                if (!dot_path.empty()) write_file(dot_path, tree_to_dot(*res.tree));
            }
            emit(solve_result_to_json(res));
        } else if (*analyze_cmd) {
            decision_table t = load_table(table_path);
            bool with_all = reduction_all || mode == "all";
            emit(analysis_to_json(analyze(t, with_all)));
        } else if (*verify) {
            decision_table t = load_table(table_path);
            decision_tree g = load_tree(tree_path);
            solve_mode m;
            if (mode == "det") m = solve_mode::det;
            else if (mode == "nondet") m = solve_mode::nondet;
            else
                raise(errc::parse_error, "unknown verify mode \"" + mode + "\"");
            verification_report rep = validate(g, t, m);
            emit(report_to_json(rep));
            return rep.ok ? 0 : 1;
        } else if (*profile) {
            attribute_family fam = family_from_flags(family_name, bound, params_path);
            worstcase_profile p = profile_family(fam, n_max, !no_confirm);
            std::string csv = profile_to_csv(p);
            if (!csv_path.empty() && csv_path != "-") write_file(csv_path, csv);
            if (csv_path == "-") {
                std::cout << csv;
            } else {
                njson rows = njson::array();
                for (const auto& e : p.entries)
                    rows.push_back(njson{{"n", e.n},
                                         {"h_ld", e.h_ld},
                                         {"h_la", e.h_la},
                                         {"L_ld", e.L_ld},
                                         {"L_la", e.L_la},
                                         {"N", e.realizable},
                                         {"idim", e.idim},
                                         {"m_hat", e.m_hat}});
                emit(njson{{"family", p.family_id}, {"n_max", p.n_max}, {"entries", std::move(rows)}});
            }
        } else if (*classify_cmd) {
            attribute_family fam = family_from_flags(family_name, bound, params_path);
            worstcase_profile p = profile_family(fam, n_max, !no_confirm);
            emit(local_type_to_json(local_type(p)));
        } else if (*reach) {
            attribute_family fam = family_from_flags(family_name, bound, params_path);
            reach_kind k;
            if (kind_name == "ld") k = reach_kind::ld;
            else if (kind_name == "la") k = reach_kind::la;
            else
                raise(errc::parse_error, "unknown reach kind \"" + kind_name + "\"");
            emit(reachability_to_json(verify_reachability(fam, n, k)));
        } else if (*oracle_cmd) {
            decision_table t = load_table(table_path);
            oracle_limits lim;
            lim.max_depth = max_depth;
            lim.max_nodes = max_nodes;
            lim.force = force;
            oracle_result det = exhaustive_det_oracle(t, lim);
            njson j;
            j["det"] = njson{{"min_depth", det.min_depth}, {"min_nodes", det.min_nodes}};
            if (force || (t.n <= lim.max_n && row_count(t) <= lim.max_rows)) {
                oracle_result nd = exhaustive_nondet_oracle(t, lim);
                j["nondet"] = njson{{"min_depth", nd.min_depth}, {"min_nodes", nd.min_nodes}};
            } else {
                j["nondet"] = nullptr;
            }
            emit(j);
        }
        return 0;
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        if (e.code() == errc::resource_limit) return 3;
        if (e.code() == errc::inconsistent_profile) return 1;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
