// End-to-end checks of the hhnet binary: exit codes, manifests, overwrite
// guards, determinism, and the documented output schemas. Runs the real
// executable (path given as argv[1]) through /bin/sh.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hhnet_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

class Cli {
public:
    Cli(std::string binary, fs::path dir) : binary_(std::move(binary)), dir_(std::move(dir)) {}

    RunResult run(const std::string& args, const std::string& env = "") {
        fs::path cap = dir_ / "capture.txt";
        std::string cmd = env + (env.empty() ? "" : " ") + binary_ + " " + args + " >" +
                          cap.string() + " 2>&1";
        int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = read_file(cap);
        return r;
    }

    fs::path file(const std::string& name) const { return dir_ / name; }

private:
    std::string binary_;
    fs::path dir_;
};

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        check(false, what + ": not valid JSON (" + e.what() + ")");
        return json::object();
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-hhnet-binary>\n";
        return 2;
    }
    TempDir tmp;
    Cli cli(argv[1], tmp.path);
    auto p = [&](const std::string& n) { return cli.file(n).string(); };

    write_file(cli.file("nodes.csv"),
               "person_id,household_id,gender\n"
               "a,h1,F\nb,h1,M\nc,h2,F\nd,h2,M\n");
    write_file(cli.file("edges.csv"),
               "source,target\na,c\na,b\n");
    write_file(cli.file("empty_edges.csv"), "source,target\n");
    write_file(cli.file("broken_edges.csv"), "source,target\na\n");

    // --- contract: output schema, provenance sidecar, manifest ---
    {
        auto r = cli.run("contract --rule basic --nodes " + p("nodes.csv") + " --edges " +
                         p("edges.csv") + " --out " + p("hh.csv"));
        check(r.exit_code == 0, "contract exits 0: " + r.out);
        std::string csv = read_file(cli.file("hh.csv"));
        check(csv == "source,target,layer,weight\nh1,h2,basic,1\n",
              "contract output csv, got: " + csv);
        json prov = parse(read_file(cli.file("hh.csv.provenance.json")), "provenance");
        check(prov.value("rule", "") == "basic", "provenance rule");
        check(prov.value("households", 0) == 2, "provenance household count");
        json man = parse(read_file(cli.file("hh.csv.manifest.json")), "manifest");
        check(man.value("command", "") == "contract", "manifest command");
        check(man["parameters"].value("rule", "") == "basic", "manifest parameter echo");
        check(man["inputs"].contains(p("nodes.csv")), "manifest input digests");
        check(man["outputs"].size() == 2, "manifest lists csv and provenance outputs");
        check(man.contains("wall_clock_ms"), "manifest wall clock");
    }

    // --- overwrite guard and --force ---
    {
        auto r = cli.run("contract --rule basic --nodes " + p("nodes.csv") + " --edges " +
                         p("edges.csv") + " --out " + p("hh.csv"));
        check(r.exit_code == 3, "refusing to overwrite exits 3");
        r = cli.run("contract --rule basic --nodes " + p("nodes.csv") + " --edges " +
                    p("edges.csv") + " --out " + p("hh.csv") + " --force");
        check(r.exit_code == 0, "--force overwrite exits 0: " + r.out);
    }

    // --- validation and I/O exit codes ---
    {
        auto r = cli.run("contract --rule bogus --nodes " + p("nodes.csv") + " --edges " +
                         p("edges.csv") + " --out " + p("x.csv"));
        check(r.exit_code == 2, "unknown rule exits 2");
        check(r.out.find("unknown rule") != std::string::npos, "unknown rule message");

        r = cli.run("contract --rule basic --nodes " + p("nodes.csv") + " --edges " +
                    p("broken_edges.csv") + " --out " + p("x.csv"));
        check(r.exit_code == 2, "malformed csv exits 2");

        r = cli.run("contract --rule basic --nodes " + p("missing.csv") + " --edges " +
                    p("edges.csv") + " --out " + p("x.csv"));
        check(r.exit_code == 3, "missing input file exits 3");

        r = cli.run("contract --no-such-flag");
        check(r.exit_code == 2, "unknown flag exits 2");

        r = cli.run("metrics --nodes " + p("nodes.csv") + " --edges " + p("empty_edges.csv") +
                    " --out " + p("m0.json"));
        check(r.exit_code == 4, "metrics on an edgeless network exits 4");
    }

    // --- metrics report ---
    {
        auto r = cli.run("metrics --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                         " --partition-from-attributes --out " + p("metrics.json"));
        check(r.exit_code == 0, "metrics exits 0: " + r.out);
        json rep = parse(read_file(cli.file("metrics.json")), "metrics report");
        check(rep["individual"].value("nodes", 0) == 4, "metrics individual node count");
        check(rep["individual"].value("edges", 0) == 2, "metrics individual edge count");
        check(rep["household"].value("nodes", 0) == 2, "metrics household node count");
        check(rep.contains("intrahousehold_edge_proportion") &&
                  rep["intrahousehold_edge_proportion"].get<double>() == 0.5,
              "metrics intra proportion");
    }

    // --- gen-er determinism + manifest replay ---
    {
        auto r = cli.run("gen-er --n 30 --p 0.2 --seed 7 --out " + p("er_a.csv"));
        check(r.exit_code == 0, "gen-er exits 0: " + r.out);
        r = cli.run("gen-er --n 30 --p 0.2 --seed 7 --out " + p("er_b.csv"));
        check(r.exit_code == 0, "gen-er second run exits 0");
        check(read_file(cli.file("er_a.csv")) == read_file(cli.file("er_b.csv")),
              "same seed, byte-identical edge lists");
        r = cli.run("gen-er --n 30 --p 0.2 --seed 8 --out " + p("er_c.csv"));
        check(read_file(cli.file("er_a.csv")) != read_file(cli.file("er_c.csv")),
              "different seed, different edge list");

        std::string before = read_file(cli.file("er_a.csv"));
        r = cli.run("gen-er --config " + p("er_a.csv.manifest.json") + " --force");
        check(r.exit_code == 0, "replay from manifest exits 0: " + r.out);
        check(read_file(cli.file("er_a.csv")) == before, "replay reproduces output bytes");
        r = cli.run("gen-er --config " + p("er_a.csv.manifest.json"));
        check(r.exit_code == 3, "replay without --force refuses to overwrite");
    }

    // --- config file + flag precedence, HHNET_SEED default ---
    {
        write_file(cli.file("gen.json"), "{\"n\": 12, \"p\": 1.0, \"out\": \"" + p("cfg.csv") +
                                             "\", \"seed\": 3}");
        auto r = cli.run("gen-er --config " + p("gen.json") + " --p 0.0 --force");
        check(r.exit_code == 0, "config-driven run exits 0: " + r.out);
        check(read_file(cli.file("cfg.csv")) == "source,target,layer,weight\n",
              "flag overrides config value");

        r = cli.run("gen-er --n 12 --p 0.3 --out " + p("env_a.csv"), "HHNET_SEED=123");
        check(r.exit_code == 0, "HHNET_SEED run exits 0: " + r.out);
        json man = parse(read_file(cli.file("env_a.csv.manifest.json")), "env manifest");
        check(man["parameters"].value("seed", 0) == 123, "HHNET_SEED echoed in manifest");
        r = cli.run("gen-er --n 12 --p 0.3 --seed 123 --out " + p("env_b.csv"));
        check(read_file(cli.file("env_a.csv")) == read_file(cli.file("env_b.csv")),
              "HHNET_SEED equals explicit --seed");
        check(r.exit_code == 0, "explicit seed run exits 0");

        r = cli.run("gen-er --n 12 --p 0.3 --out " + p("env_c.csv"), "HHNET_SEED=abc");
        check(r.exit_code == 2, "non-numeric HHNET_SEED exits 2");
    }

    // --- sweep-inversity CSV header ---
    {
        auto r = cli.run("sweep-inversity --nodes " + p("nodes.csv") + " --edges " +
                         p("edges.csv") + " --grid 0.0:1.0:0.5 --reps 10 --seed 1 --out " +
                         p("sweep.csv"));
        check(r.exit_code == 0, "sweep exits 0: " + r.out);
        std::istringstream in(read_file(cli.file("sweep.csv")));
        std::string header;
        std::getline(in, header);
        check(header == "p,mean_inversity,q05,q95,undefined_count", "sweep csv header");
        int rows = 0;
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) ++rows;
        check(rows == 3, "sweep row per grid point");
    }

    // --- cascade to stdout: body JSON with parameters and manifest ---
    {
        write_file(cli.file("seeds.json"), "{\"level\": \"person\", \"ids\": [\"a\"]}");
        auto r = cli.run("cascade --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                         " --seeds " + p("seeds.json") +
                         " --q 1.0 --intra 1.0 --reps 50 --seed 4");
        check(r.exit_code == 0, "cascade exits 0: " + r.out);
        json body = parse(r.out, "cascade stdout");
        check(body.value("mean_reach", 0.0) == 0.75, "cascade reaches a,b,c of 4 at q=intra=1");
        check(body["parameters"].value("q", 0.0) == 1.0, "cascade parameter echo");
        check(body["manifest"].value("command", "") == "cascade", "cascade inline manifest");

        write_file(cli.file("bad_seeds.json"), "{\"level\": \"person\", \"ids\": [\"zz\"]}");
        r = cli.run("cascade --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                    " --seeds " + p("bad_seeds.json") + " --reps 5");
        check(r.exit_code == 2, "unknown seed id exits 2");
    }

    // --- seeds / compare-seeds / cross-eval / dc round trip ---
    {
        auto r = cli.run("seeds --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                         " --k 1 --q 0.5 --intra 0.9 --reps 200 --seed 2 --out " +
                         p("seeds_out.json"));
        check(r.exit_code == 0, "seeds exits 0: " + r.out);
        json s = parse(read_file(cli.file("seeds_out.json")), "seeds output");
        check(s["seeds"].size() == 1 && s["seeds"][0] == "a", "greedy picks the connector");

        r = cli.run("compare-seeds --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                    " --k 1 --q 0.5 --intra 0.9 --reps 100 --seed 2 --out " + p("cmp.json"));
        check(r.exit_code == 0, "compare-seeds exits 0: " + r.out);
        json c = parse(read_file(cli.file("cmp.json")), "compare output");
        check(c["individual_seeds"].size() == 1 && c["household_seeds"].size() == 1,
              "compare seed lists sized by k");

        r = cli.run("cross-eval --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                    " --person-ids a --household-ids h1 --q 1.0 --intra 1.0 "
                    "--activation 1.0 --reps 20 --seed 5");
        check(r.exit_code == 0, "cross-eval exits 0: " + r.out);
        json x = parse(r.out, "cross-eval stdout");
        check(x.value("mapped_up_reach", -1.0) == x.value("household_reach", -2.0),
              "seed a maps to household h1 exactly");

        r = cli.run("dc --edges " + p("edges.csv") + " --T 1 --passing 0.5");
        check(r.exit_code == 0, "dc exits 0: " + r.out);
        json d = parse(r.out, "dc stdout");
        check(d.value("horizon_used", 0) == 1, "dc echoes horizon");
        check(d["scores"].value("a", 0.0) == 1.0, "dc T=1 row sum for the connector");

        r = cli.run("dc-gendered --nodes " + p("nodes.csv") + " --edges " + p("edges.csv") +
                    " --genders F,M --T 2");
        check(r.exit_code == 0, "dc-gendered exits 0: " + r.out);
        json g = parse(r.out, "dc-gendered stdout");
        check(g["base_vs_a"].contains("overlap"), "dc-gendered report shape");
    }

    // --- verify-er ---
    {
        auto r = cli.run("verify-er --n 8 --p 0.0 --sizes 1,3 --draws 120 --seed 9 --out " +
                         p("verify.json"));
        check(r.exit_code == 0, "verify-er exits 0: " + r.out);
        json v = parse(read_file(cli.file("verify.json")), "verify report");
        check(v.value("pass", false), "verify-er passes at p=0");
        check(v["sizes"] == json({1, 3, 1, 3}), "size pattern cycled over n");

        r = cli.run("verify-er --n 8 --p 0.1 --sizes 3 --draws 120 --seed 9 --out " +
                    p("verify2.json"));
        check(r.exit_code == 2, "non-tiling size pattern exits 2");
    }

    // --- recommend ---
    {
        write_file(cli.file("answers.json"),
                   "{\n"
                   "  \"proximity\": true,\n"
                   "  \"similarity\": false,\n"
                   "  \"common_fate\": true,\n"
                   "  \"internal_diffusion\": false,\n"
                   "  \"similarity_dimension\": \"caste\",\n"
                   "  \"rationale\": {\n"
                   "    \"proximity\": \"co-resident households\",\n"
                   "    \"similarity\": \"members differ in role and caste\",\n"
                   "    \"common_fate\": \"shared budget\",\n"
                   "    \"internal_diffusion\": \"no evidence of within-household relay\"\n"
                   "  }\n"
                   "}\n");
        auto r = cli.run("recommend --answers " + p("answers.json"));
        check(r.exit_code == 0, "recommend exits 0: " + r.out);
        json rec = parse(r.out, "recommend stdout");
        check(rec.value("level", "") == "individual", "recommend level");
        check(rec.value("edge_weighting", "") == "similarity-weighted", "recommend weighting");
        check(rec.value("intrahousehold_policy", "") == "reported-only", "recommend policy");
        check(rec.value("illusion_flag", false), "recommend raises the illusion flag");
        check(rec["trace"].size() >= 2, "recommend trace present");

        r = cli.run("recommend");
        check(r.exit_code == 2, "recommend with no answer source exits 2");
    }

    // --- batch over a village directory ---
    {
        fs::path vdir = tmp.path / "villages";
        fs::create_directories(vdir);
        write_file(vdir / "v2_nodes.csv",
                   "person_id,household_id,gender\na,h1,F\nb,h1,M\nc,h2,F\n");
        write_file(vdir / "v2_edges.csv", "source,target\na,b\na,c\n");
        write_file(vdir / "v1_nodes.csv",
                   "person_id,household_id,gender\nx,h1,F\ny,h2,M\nz,h3,F\n");
        write_file(vdir / "v1_edges.csv", "source,target\nx,y\ny,z\n");
        write_file(vdir / "stray.txt", "ignored\n");

        auto r = cli.run("batch --villages " + vdir.string() + " --op metrics --out " +
                         p("batch.csv"));
        check(r.exit_code == 0, "batch exits 0: " + r.out);
        std::istringstream in(read_file(cli.file("batch.csv")));
        std::string line;
        std::getline(in, line);
        check(line == "village,metric,individual,household", "batch csv header");
        std::vector<std::string> rows;
        while (std::getline(in, line))
            if (!line.empty()) rows.push_back(line);
        check(rows.size() == 8, "batch writes four metric rows per village");
        check(rows.size() == 8 && rows[0].rfind("v1,assortativity,", 0) == 0 &&
                  rows[4].rfind("v2,assortativity,", 0) == 0,
              "batch rows sorted by village id");

        r = cli.run("batch --villages " + vdir.string() +
                    " --op seed-overlap --k 2 --reps 50 --seed 3 --out " + p("overlap.csv"));
        check(r.exit_code == 0, "batch seed-overlap exits 0: " + r.out);
        std::istringstream in2(read_file(cli.file("overlap.csv")));
        std::getline(in2, line);
        check(line == "village,k,overlap", "seed-overlap header");
    }

    if (failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cerr << "test_cli: " << failures << " check(s) failed\n";
    return 1;
}
