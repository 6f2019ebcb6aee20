// Drives the built CLI binary end to end: generation, solving, verification,
// analysis, profiling and the oracle, checking exit codes, JSON shapes and
// byte stability across thread counts. Invoked as: cli_roundtrip <dtlab-path>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

int failures = 0;

#define EXPECT(cond, what)                                                       \
    do {                                                                         \
        if (!(cond)) {                                                           \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << what \
                      << "\n";                                                   \
            ++failures;                                                          \
        }                                                                        \
    } while (0)

struct run_result {
    int exit_code = -1;
    std::string out;
};

run_result run(const std::string& cmd) {
    run_result r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse(const std::string& text) {
    return nlohmann::json::parse(text, nullptr, false);
}

std::string strip_stats(const std::string& text) {
    auto j = parse(text);
    if (j.is_object() && j.contains("stats")) j["stats"] = nullptr;
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_roundtrip <path-to-dtlab>\n";
        return 2;
    }
    std::string bin = argv[1];
    auto tmp = std::filesystem::temp_directory_path() / "dtlab_cli_test";
    std::filesystem::create_directories(tmp);
    std::string table = (tmp / "t.json").string();
    std::string tree = (tmp / "g.json").string();
    std::string dot = (tmp / "g.dot").string();

    // gen -> solve -> verify for every family and solve mode
    const char* families[] = {"u1", "u2", "u3", "halfplane", "feature"};
    const char* modes[] = {"det-depth", "det-nodes",    "nondet-depth",
                           "nondet-nodes", "reduction-tree"};
    for (const char* fam : families) {
        auto gen = run(bin + " gen --family " + fam + " --n 3 -o " + table);
        EXPECT(gen.exit_code == 0, std::string("gen ") + fam);
        auto doc = parse(gen.out);
        EXPECT(doc.is_object() && doc["format"] == "dtable-v1", "gen emits dtable-v1");

        for (const char* mode : modes) {
            auto solve =
                run(bin + " solve --table " + table + " --mode " + mode + " -o " + tree);
            EXPECT(solve.exit_code == 0, std::string("solve ") + fam + " " + mode);
            auto sj = parse(solve.out);
            EXPECT(sj.is_object() && sj.contains("objective") && sj.contains("optimality") &&
                       sj.contains("tree") && sj.contains("stats"),
                   "solve result shape");

            std::string vmode = std::string(mode).find("det-") == 0 ? "det" : "nondet";
            auto verify =
                run(bin + " verify --table " + table + " --tree " + tree + " --mode " + vmode);
            EXPECT(verify.exit_code == 0, std::string("verify ") + fam + " " + mode);
        }
        auto budget = run(bin + " solve --table " + table +
                          " --mode det-nodes-budget --budget 3 -o " + tree);
        EXPECT(budget.exit_code == 0, std::string("budgeted solve ") + fam);
        EXPECT(run(bin + " verify --table " + table + " --tree " + tree + " --mode det")
                       .exit_code == 0,
               "budgeted verify");
    }

    // serialized round trip: re-reading and re-writing is byte-identical
    {
        run(bin + " gen --family u1 --n 4 -o " + table);
        std::ifstream in(table);
        std::stringstream buf;
        buf << in.rdbuf();
        auto again = run(bin + " gen --family u1 --n 4");
        EXPECT(again.out == buf.str(), "gen byte-stability file vs stdout");
    }

    // corrupted witness: verify exits 1 and lists a violation
    {
        run(bin + " gen --family u1 --n 2 -o " + table);
        run(bin + " solve --table " + table + " --mode det-nodes -o " + tree);
        std::ifstream in(tree);
        nlohmann::json tj;
        in >> tj;
        for (auto& node : tj["nodes"])
            if (node["kind"] == "term" && node["decision"] == 3) node["decision"] = 2;
        std::ofstream out(tree);
        out << tj.dump();
        out.close();
        auto verify = run(bin + " verify --table " + table + " --tree " + tree + " --mode det");
        EXPECT(verify.exit_code == 1, "corrupted witness exits 1");
        auto vj = parse(verify.out);
        EXPECT(vj["ok"] == false && !vj["violations"].empty(), "violation listed");
    }

    // labeling and analysis flags
    {
        auto constant = run(bin + " gen --family u1 --n 3 --labeling constant");
        EXPECT(constant.exit_code == 0, "gen with constant labeling");
        auto cj = parse(constant.out);
        for (const auto& row : cj["rows"]) EXPECT(row["d"] == 1, "constant labeling value");

        run(bin + " gen --family u1 --n 3 -o " + table);
        auto full = run(bin + " analyze --table " + table + " --reduction all");
        EXPECT(full.exit_code == 0, "analyze --reduction all");
        EXPECT(parse(full.out)["reduction_all"] == 2, "all-partial reduction value");
    }

    // usage errors exit 2; resource limits exit 3
    EXPECT(run(bin + " solve --table /nonexistent.json --mode det-depth").exit_code == 2,
           "missing table exits 2");
    EXPECT(run(bin + " gen --family nosuch --n 2").exit_code == 2, "unknown family exits 2");
    EXPECT(run(bin + " gen --family u1 --n 3 --bound 2").exit_code == 2,
           "too-small universe bound exits 2");
    EXPECT(run(bin + " frobnicate").exit_code == 2, "unknown subcommand exits 2");
    {
        run(bin + " gen --family u1 --n 5 -o " + table);
        EXPECT(run(bin + " oracle --table " + table).exit_code == 3,
               "oracle beyond caps exits 3");
    }

    // DOT output
    {
        run(bin + " gen --family u1 --n 2 -o " + table);
        auto solve = run(bin + " solve --table " + table + " --mode reduction-tree --dot " + dot);
        EXPECT(solve.exit_code == 0, "reduction-tree with dot");
        std::ifstream in(dot);
        std::stringstream buf;
        buf << in.rdbuf();
        EXPECT(buf.str().find("digraph") == 0, "dot file starts with digraph");
        EXPECT(buf.str().find("shape=point") != std::string::npos, "root is a point");
    }

    // oracle agrees with the solvers on a small table
    {
        run(bin + " gen --family u3 --n 2 -o " + table);
        auto oracle = run(bin + " oracle --table " + table);
        EXPECT(oracle.exit_code == 0, "oracle runs");
        auto oj = parse(oracle.out);
        EXPECT(oj["det"]["min_depth"] == 2 && oj["det"]["min_nodes"] == 8, "oracle det minima");
        EXPECT(oj["nondet"]["min_nodes"] == 8, "oracle nondet minima");
    }

    // outputs are independent of DT_THREADS (stats stripped per contract)
    {
        for (std::string sub : {" profile --family u1 --n-max 6 --csv -",
                                " classify --family u2 --n-max 5",
                                " reach --family u1 --n 4 --kind la"}) {
            auto one = run("DT_THREADS=1 " + bin + sub);
            auto four = run("DT_THREADS=4 " + bin + sub);
            EXPECT(one.exit_code == 0 && four.exit_code == 0, "thread-count runs" + sub);
            EXPECT(one.out == four.out, "byte-identical across DT_THREADS" + sub);
        }
        run(bin + " gen --family u1 --n 3 -o " + table);
        auto one = run("DT_THREADS=1 " + bin + " solve --table " + table + " --mode det-nodes");
        auto four = run("DT_THREADS=4 " + bin + " solve --table " + table + " --mode det-nodes");
        EXPECT(strip_stats(one.out) == strip_stats(four.out),
               "solve byte-identical across DT_THREADS modulo stats");
    }

    if (failures == 0) {
        std::cout << "cli_roundtrip: all checks passed\n";
        return 0;
    }
    std::cerr << "cli_roundtrip: " << failures << " failures\n";
    return 1;
}
