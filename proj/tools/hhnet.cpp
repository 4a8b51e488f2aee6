// hhnet: command-line front end over the household-networks library.
//
// Every run echoes its effective parameters and writes a manifest next to its
// first output; `--config <manifest>` replays a run (add --force to let it
// overwrite the artifacts it is reproducing). Flags beat config values.
// Exit codes: 0 success, 2 validation, 3 I/O, 4 numeric degeneracy.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hhnet/contraction.hpp"
#include "hhnet/diffusion.hpp"
#include "hhnet/entitativity.hpp"
#include "hhnet/errors.hpp"
#include "hhnet/graph.hpp"
#include "hhnet/metrics.hpp"
#include "hhnet/randgraph.hpp"
#include "hhnet/rng.hpp"
#include "hhnet/village.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hhnet;

namespace {

constexpr const char* kTool = "hhnet";
constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path + ": read failed");
    return buf.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << "fnv1a:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void write_output(const std::string& path, const std::string& content, bool force) {
    fs::path p(path);
    if (fs::exists(p) && !force)
        throw IoError(path + ": already exists (pass --force to overwrite)");
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << content;
    if (!out) throw IoError(path + ": write failed");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        size_t b = cur.find_first_not_of(" \t");
        size_t e = cur.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return parts;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError({std::string(what) + " must be an unsigned integer, got '" + s + "'"});
    }
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(); }
json opt_json(const std::optional<std::string>& v) { return v ? json(*v) : json(); }

std::string csv_cell(double v, int precision = 12) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Parameter handling: CLI flags layered over a flat JSON config
// ---------------------------------------------------------------------------

json load_flat_config(const std::string& path) {
    std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        long line = 1 + std::count(text.begin(),
                                   text.begin() + static_cast<long>(std::min(byte, text.size())),
                                   '\n');
        throw ValidationError({path + " line " + std::to_string(line) + ": malformed JSON (" +
                               std::string(e.what()) + ")"});
    }
    if (!doc.is_object()) throw ValidationError({path + ": config must be a JSON object"});
    // a prior run's manifest works directly as a config
    if (doc.contains("parameters") && doc["parameters"].is_object()) return doc["parameters"];
    return doc;
}

// One subcommand's options: registration wires a CLI flag, a config key, and
// a storage reference together, so precedence (flag > config > default) and
// the parameter echo need no per-command code. Required options are enforced
// after the config overlay, which is why they are not CLI11-required.
class Cmd {
public:
    Cmd(CLI::App& app, const char* name, const char* help) : name_(name) {
        sub_ = app.add_subcommand(name, help);
        sub_->add_option("--config", config_path_,
                         "flat JSON parameter file, or a previous run's manifest");
        sub_->add_flag("--force", force_, "allow overwriting existing outputs");
    }

    CLI::App* sub() { return sub_; }
    const std::string& name() const { return name_; }
    bool force() const { return force_; }

    template <typename T>
    CLI::Option* option(const char* flag, T& ref, const char* key, const char* help,
                        bool required = false) {
        auto* o = sub_->add_option(flag, ref, help);
        bindings_.push_back(Binding{
            o, key, required, false,
            [&ref](const json& v) { ref = v.get<T>(); },
            [&ref]() { return json(ref); }});
        return o;
    }

    CLI::Option* flag(const char* f, bool& ref, const char* key, const char* help) {
        auto* o = sub_->add_flag(f, ref, help);
        bindings_.push_back(Binding{
            o, key, false, false,
            [&ref](const json& v) { ref = v.get<bool>(); },
            [&ref]() { return json(ref); }});
        return o;
    }

    CLI::Option* seed_option(std::uint64_t& ref) {
        auto* o = option("--seed", ref, "seed", "rng seed (default: $HHNET_SEED, else 0)");
        bindings_.back().is_seed = true;
        return o;
    }

    // Overlay config under the flags, apply the seed env default, check
    // required options, and return the effective parameter echo.
    json finalize() {
        json cfg = json::object();
        if (!config_path_.empty()) cfg = load_flat_config(config_path_);
        std::vector<std::string> missing;
        for (auto& b : bindings_) {
            bool given = b.opt->count() > 0;
            bool in_cfg = cfg.contains(b.key);
            try {
                if (!given && in_cfg) b.load(cfg[b.key]);
            } catch (const json::exception& e) {
                throw ValidationError({std::string("config key '") + b.key + "': " + e.what()});
            }
            if (!given && !in_cfg) {
                if (b.is_seed) {
                    if (const char* env = std::getenv("HHNET_SEED"))
                        b.load(json(parse_u64(env, "HHNET_SEED")));
                } else if (b.required) {
                    missing.push_back(std::string("missing required option ") +
                                      b.opt->get_name());
                }
            }
        }
        if (!missing.empty()) throw ValidationError(missing);
        json params = json::object();
        for (auto& b : bindings_) params[b.key] = b.dump();
        return params;
    }

private:
    struct Binding {
        CLI::Option* opt;
        std::string key;
        bool required;
        bool is_seed;
        std::function<void(const json&)> load;
        std::function<json()> dump;
    };

    CLI::App* sub_ = nullptr;
    std::string name_;
    std::string config_path_;
    bool force_ = false;
    std::vector<Binding> bindings_;
};

// Collects the inputs, outputs, and timing of one run and writes the
// manifest beside the first output.
struct Run {
    std::string command;
    json params;
    bool force;
    json inputs = json::object();
    std::vector<std::string> outputs;
    json skipped = json::array();
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Run(const Cmd& cmd, json p) : command(cmd.name()), params(std::move(p)), force(cmd.force()) {}

    void note_input(const std::string& path) { inputs[path] = fnv1a_hex(read_file(path)); }

    void emit(const std::string& path, const std::string& content) {
        write_output(path, content, force);
        outputs.push_back(path);
    }

    json manifest() const {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        json m = {{"tool", kTool},
                  {"version", kVersion},
                  {"command", command},
                  {"parameters", params},
                  {"inputs", inputs},
                  {"outputs", outputs},
                  {"wall_clock_ms", ms}};
        if (!skipped.empty()) m["skipped"] = skipped;
        return m;
    }

    // Call after the data artifacts are written.
    void finish(std::ostream* stdout_body = nullptr, json body = {}) {
        if (!outputs.empty()) {
            write_output(outputs.front() + ".manifest.json", manifest().dump(2) + "\n", force);
        } else if (stdout_body) {
            body["manifest"] = manifest();
        }
        if (stdout_body) *stdout_body << body.dump(2) << "\n";
    }
};

NetworkBundle load_bundle(Run& run, const std::string& nodes_path,
                          const std::string& edges_path) {
    run.note_input(nodes_path);
    run.note_input(edges_path);
    return build_network(load_nodes_csv(nodes_path), load_edges_csv(edges_path));
}

// Network from an edge list alone: the node set is the set of endpoints.
IndividualNetwork load_edge_network(Run& run, const std::string& edges_path) {
    run.note_input(edges_path);
    auto records = load_edges_csv(edges_path);
    std::set<std::string> ids;
    for (const auto& r : records) {
        ids.insert(r.source);
        ids.insert(r.target);
    }
    return IndividualNetwork::from_records({ids.begin(), ids.end()}, records, false);
}

std::string edges_csv_text(const IndividualNetwork& network) {
    std::ostringstream out;
    write_edges_csv(out, network);
    return out.str();
}

// ---------------------------------------------------------------------------
// contract
// ---------------------------------------------------------------------------

struct ContractOpts {
    std::string rule, gender, layers, nodes, edges, out;
    bool normalize = false;
};

void run_contract(Cmd& cmd, ContractOpts& o) {
    Run run(cmd, cmd.finalize());

    const std::set<std::string> rules = {"basic", "weighted", "gendered", "layered"};
    std::vector<std::string> issues;
    if (!rules.count(o.rule))
        issues.push_back("unknown rule '" + o.rule + "' (expected basic|weighted|gendered|layered)");
    if (o.normalize && o.rule != "weighted")
        issues.push_back("--normalize applies only to --rule weighted");
    if (!o.gender.empty() && o.rule != "gendered")
        issues.push_back("--gender applies only to --rule gendered");
    if (o.rule == "gendered" && o.gender.empty())
        issues.push_back("--rule gendered requires --gender");
    if (!o.layers.empty() && o.rule != "layered")
        issues.push_back("--layers applies only to --rule layered");
    if (o.rule == "layered" && o.layers.empty())
        issues.push_back("--rule layered requires --layers");
    if (!issues.empty()) throw ValidationError(issues);

    auto b = load_bundle(run, o.nodes, o.edges);
    HouseholdNetwork hh;
    if (o.rule == "basic") hh = contract_basic(b.network, b.partition);
    else if (o.rule == "weighted") hh = contract_weighted(b.network, b.partition, o.normalize);
    else if (o.rule == "gendered")
        hh = contract_gendered(b.network, b.partition, b.attributes, o.gender);
    else hh = contract_layered(b.network, b.partition, split_list(o.layers));

    run.emit(o.out, edges_csv_text(hh.as_network()));

    json prov = {{"rule", hh.provenance.rule},
                 {"normalized", hh.provenance.normalized},
                 {"gender", opt_json(hh.provenance.gender)},
                 {"layers", hh.provenance.layers},
                 {"households", hh.household_count()},
                 {"edges", hh.edges.size()},
                 {"nodes_file", o.nodes},
                 {"edges_file", o.edges}};
    run.emit(o.out + ".provenance.json", prov.dump(2) + "\n");
    run.finish();
}

void setup_contract(CLI::App& app) {
    auto o = std::make_shared<ContractOpts>();
    auto cmd = std::make_shared<Cmd>(app, "contract",
                                     "contract an individual network into a household network");
    cmd->option("--rule", o->rule, "rule", "basic | weighted | gendered | layered", true);
    cmd->flag("--normalize", o->normalize, "normalize",
              "weighted rule: member proportions instead of summed weights");
    cmd->option("--gender", o->gender, "gender", "gendered rule: keep edges with both ends of this gender");
    cmd->option("--layers", o->layers, "layers", "layered rule: comma-separated layer names");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV (person_id,household_id,gender[,role...])", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV (source,target[,layer[,weight]])", true);
    cmd->option("--out", o->out, "out", "output household edge CSV", true);
    cmd->sub()->callback([o, cmd] { run_contract(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

struct MetricsOpts {
    std::string nodes, edges, out;
    bool partition = false;
};

json metric_block(int n, const std::vector<std::pair<int, int>>& pairs) {
    return {{"nodes", n},
            {"edges", pairs.size()},
            {"assortativity", opt_json(degree_assortativity(n, pairs))},
            {"clustering", average_clustering(n, pairs)},
            {"inversity", opt_json(inversity(n, pairs))}};
}

void run_metrics(Cmd& cmd, MetricsOpts& o) {
    Run run(cmd, cmd.finalize());
    auto b = load_bundle(run, o.nodes, o.edges);

    json report;
    report["individual"] = metric_block(b.network.node_count(), b.network.simple_pairs());
    if (o.partition) {
        auto hh = contract_basic(b.network, b.partition);
        report["household"] = metric_block(hh.household_count(), hh.simple_pairs());
        report["intrahousehold_edge_proportion"] =
            intrahousehold_edge_proportion(decompose(b.network, b.partition));
    }
    run.emit(o.out, report.dump(2) + "\n");
    run.finish();
}

void setup_metrics(CLI::App& app) {
    auto o = std::make_shared<MetricsOpts>();
    auto cmd = std::make_shared<Cmd>(app, "metrics",
                                     "assortativity, clustering, and inversity of a network");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->flag("--partition-from-attributes", o->partition, "partition_from_attributes",
              "also contract by the household attribute and report both levels");
    cmd->option("--out", o->out, "out", "output report JSON", true);
    cmd->sub()->callback([o, cmd] { run_metrics(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// sweep-inversity
// ---------------------------------------------------------------------------

struct SweepOpts {
    std::string nodes, edges, grid = "0.1:1.0:0.1", out;
    int reps = 100;
    std::uint64_t seed = 0;
};

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
        throw ValidationError({"grid must look like start:stop:step, got '" + spec + "'"});
    if (step <= 0.0) throw ValidationError({"grid step must be positive"});
    if (stop < start) throw ValidationError({"grid stop must not precede start"});
    std::vector<double> values;
    for (int k = 0;; ++k) {
        double v = start + step * k;
        if (v > stop + 1e-9) break;
        values.push_back(std::min(v, stop));
    }
    return values;
}

void run_sweep(Cmd& cmd, SweepOpts& o) {
    Run run(cmd, cmd.finalize());
    auto b = load_bundle(run, o.nodes, o.edges);

    SweepConfig cfg;
    cfg.p_grid = parse_grid(o.grid);
    cfg.replications = o.reps;
    cfg.seed = o.seed;
    auto points = inversity_removal_sweep(b.network, b.partition, cfg, Exec::parallel);

    std::ostringstream out;
    out << "p,mean_inversity,q05,q95,undefined_count\n";
    for (const auto& pt : points)
        out << csv_cell(pt.p) << ',' << csv_cell(pt.mean_inversity) << ',' << csv_cell(pt.q05)
            << ',' << csv_cell(pt.q95) << ',' << pt.undefined_replicates << "\n";
    run.emit(o.out, out.str());
    run.finish();
}

void setup_sweep(CLI::App& app) {
    auto o = std::make_shared<SweepOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "sweep-inversity",
        "inversity under random intra-household edge removal over a proportion grid");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--grid", o->grid, "grid", "removal proportions start:stop:step");
    cmd->option("--reps", o->reps, "reps", "replications per grid point");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output CSV", true);
    cmd->sub()->callback([o, cmd] { run_sweep(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// cascade
// ---------------------------------------------------------------------------

struct CascadeOpts {
    std::string nodes, edges, seeds, out;
    double q = 0.05, intra = 0.7;
    int reps = 1000;
    std::uint64_t seed = 0;
};

struct SeedFile {
    std::string level;  // person | household
    std::vector<std::string> ids;
};

SeedFile load_seed_file(Run& run, const std::string& path) {
    run.note_input(path);
    std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": malformed JSON (" + std::string(e.what()) + ")"});
    }
    std::vector<std::string> issues;
    SeedFile sf;
    if (!doc.contains("level") || !doc["level"].is_string())
        issues.push_back(path + ": field 'level' (person|household) is required");
    else {
        sf.level = doc["level"].get<std::string>();
        if (sf.level != "person" && sf.level != "household")
            issues.push_back(path + ": level must be person or household, got '" + sf.level + "'");
    }
    if (!doc.contains("ids") || !doc["ids"].is_array())
        issues.push_back(path + ": field 'ids' must be an array of id strings");
    else
        for (const auto& v : doc["ids"]) {
            if (!v.is_string())
                issues.push_back(path + ": every seed id must be a string");
            else
                sf.ids.push_back(v.get<std::string>());
        }
    if (!issues.empty()) throw ValidationError(issues);
    return sf;
}

void run_cascade(Cmd& cmd, CascadeOpts& o) {
    Run run(cmd, cmd.finalize());
    auto b = load_bundle(run, o.nodes, o.edges);
    auto sf = load_seed_file(run, o.seeds);

    CascadeConfig cfg;
    cfg.extra_prob = o.q;
    cfg.intra_prob = o.intra;
    cfg.replications = o.reps;
    cfg.seed = o.seed;

    CascadeGraph graph = sf.level == "person"
                             ? cascade_graph(decompose(b.network, b.partition), o.q, o.intra)
                             : cascade_graph(contract_basic(b.network, b.partition), o.q);
    std::vector<std::string> issues;
    std::vector<int> seeds;
    for (const auto& id : sf.ids) {
        int v = graph.index_of(id);
        if (v < 0)
            issues.push_back("unknown " + sf.level + " id '" + id + "'");
        else
            seeds.push_back(v);
    }
    if (!issues.empty()) throw ValidationError(issues);

    auto summary = independent_cascade(graph, seeds, cfg, Exec::parallel);
    json body = {{"level", sf.level},
                 {"graph_nodes", graph.n},
                 {"seeds", sf.ids},
                 {"replications", o.reps},
                 {"mean_reach", summary.mean_reach},
                 {"std_reach", summary.std_reach},
                 {"parameters", run.params}};
    if (!o.out.empty()) {
        run.emit(o.out, body.dump(2) + "\n");
        run.finish();
    } else {
        run.finish(&std::cout, body);
    }
}

void setup_cascade(CLI::App& app) {
    auto o = std::make_shared<CascadeOpts>();
    auto cmd = std::make_shared<Cmd>(app, "cascade",
                                     "independent-cascade reach of a fixed seed set");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--seeds", o->seeds, "seeds", "seed JSON: {\"level\": ..., \"ids\": [...]}", true);
    cmd->option("--q", o->q, "q", "cross-household transmission probability");
    cmd->option("--intra", o->intra, "intra", "within-household transmission probability");
    cmd->option("--reps", o->reps, "reps", "cascade replications");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output JSON (default: stdout)");
    cmd->sub()->callback([o, cmd] { run_cascade(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// seeds / compare-seeds / cross-eval
// ---------------------------------------------------------------------------

struct SeedsOpts {
    std::string nodes, edges, level = "person", out;
    int k = 10, reps = 1000;
    double q = 0.05, intra = 0.7;
    std::uint64_t seed = 0;
};

void run_seeds(Cmd& cmd, SeedsOpts& o) {
    Run run(cmd, cmd.finalize());
    if (o.level != "person" && o.level != "household")
        throw ValidationError({"--level must be person or household, got '" + o.level + "'"});
    auto b = load_bundle(run, o.nodes, o.edges);

    CascadeConfig cfg;
    cfg.extra_prob = o.q;
    cfg.intra_prob = o.intra;
    cfg.replications = o.reps;
    cfg.seed = o.seed;

    CascadeGraph graph = o.level == "person"
                             ? cascade_graph(decompose(b.network, b.partition), o.q, o.intra)
                             : cascade_graph(contract_basic(b.network, b.partition), o.q);
    auto result = greedy_seed_selection(graph, o.k, cfg, Exec::parallel);

    json ids = json::array();
    for (int v : result.seeds) ids.push_back(graph.labels[static_cast<size_t>(v)]);
    json body = {{"level", o.level},
                 {"k", o.k},
                 {"seeds", ids},
                 {"reach_after", result.reach_after},
                 {"parameters", run.params}};
    run.emit(o.out, body.dump(2) + "\n");
    run.finish();
}

void setup_seeds(CLI::App& app) {
    auto o = std::make_shared<SeedsOpts>();
    auto cmd = std::make_shared<Cmd>(app, "seeds",
                                     "greedy influence-maximizing seed set at one level");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--k", o->k, "k", "seed budget");
    cmd->option("--q", o->q, "q", "cross-household transmission probability");
    cmd->option("--intra", o->intra, "intra", "within-household transmission probability");
    cmd->option("--reps", o->reps, "reps", "cascade replications");
    cmd->option("--level", o->level, "level", "person | household");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output JSON", true);
    cmd->sub()->callback([o, cmd] { run_seeds(*cmd, *o); });
}

struct CompareSeedsOpts {
    std::string nodes, edges, out;
    int k = 10, reps = 1000;
    double q = 0.05, intra = 0.7;
    std::uint64_t seed = 0;
};

void run_compare_seeds(Cmd& cmd, CompareSeedsOpts& o) {
    Run run(cmd, cmd.finalize());
    auto b = load_bundle(run, o.nodes, o.edges);

    CascadeConfig cfg;
    cfg.extra_prob = o.q;
    cfg.intra_prob = o.intra;
    cfg.replications = o.reps;
    cfg.seed = o.seed;
    auto cmp = compare_seed_sets(b, o.k, cfg, Exec::parallel);

    json body = {{"k", o.k},
                 {"individual_seeds", cmp.individual_seeds},
                 {"household_seeds", cmp.household_seeds},
                 {"mapped_households", cmp.mapped_households},
                 {"overlap", cmp.overlap},
                 {"parameters", run.params}};
    run.emit(o.out, body.dump(2) + "\n");
    run.finish();
}

void setup_compare_seeds(CLI::App& app) {
    auto o = std::make_shared<CompareSeedsOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "compare-seeds", "greedy seed sets at both levels and their mapped overlap");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--k", o->k, "k", "seed budget");
    cmd->option("--q", o->q, "q", "cross-household transmission probability");
    cmd->option("--intra", o->intra, "intra", "within-household transmission probability");
    cmd->option("--reps", o->reps, "reps", "cascade replications");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output JSON", true);
    cmd->sub()->callback([o, cmd] { run_compare_seeds(*cmd, *o); });
}

struct CrossEvalOpts {
    std::string nodes, edges, person_ids, household_ids, out;
    double q = 0.05, intra = 0.7, activation = 0.7;
    int reps = 1000;
    std::uint64_t seed = 0;
};

void run_cross_eval(Cmd& cmd, CrossEvalOpts& o) {
    Run run(cmd, cmd.finalize());
    auto b = load_bundle(run, o.nodes, o.edges);

    CascadeConfig cfg;
    cfg.extra_prob = o.q;
    cfg.intra_prob = o.intra;
    cfg.replications = o.reps;
    cfg.seed = o.seed;
    auto persons = o.person_ids.empty() ? std::vector<std::string>{} : split_list(o.person_ids);
    auto households =
        o.household_ids.empty() ? std::vector<std::string>{} : split_list(o.household_ids);
    auto ev = cross_evaluate(b, persons, households, cfg, o.activation, Exec::parallel);

    json body = {{"individual_reach", ev.individual_reach},
                 {"household_reach", ev.household_reach},
                 {"mapped_up_reach", ev.mapped_up_reach},
                 {"mapped_down_reach", ev.mapped_down_reach},
                 {"mean_empty_households", ev.mean_empty_households},
                 {"replications", ev.replications},
                 {"parameters", run.params}};
    if (!o.out.empty()) {
        run.emit(o.out, body.dump(2) + "\n");
        run.finish();
    } else {
        run.finish(&std::cout, body);
    }
}

void setup_cross_eval(CLI::App& app) {
    auto o = std::make_shared<CrossEvalOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "cross-eval", "evaluate person and household seed sets on both representations");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--person-ids", o->person_ids, "person_ids", "comma-separated person seed ids", true);
    cmd->option("--household-ids", o->household_ids, "household_ids",
                "comma-separated household seed ids", true);
    cmd->option("--q", o->q, "q", "cross-household transmission probability");
    cmd->option("--intra", o->intra, "intra", "within-household transmission probability");
    cmd->option("--activation", o->activation, "activation",
                "member activation probability when mapping households down");
    cmd->option("--reps", o->reps, "reps", "cascade replications");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output JSON (default: stdout)");
    cmd->sub()->callback([o, cmd] { run_cross_eval(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// dc / dc-gendered
// ---------------------------------------------------------------------------

struct DcOpts {
    std::string nodes, edges, gendered, out;
    int T = 0;
    double passing = 1.0;
};

json rank_json(const RankCorrelation& rc) {
    return {{"spearman", opt_json(rc.spearman)}, {"overlap", rc.overlap}};
}

void run_dc(Cmd& cmd, DcOpts& o, bool gendered_required) {
    Run run(cmd, cmd.finalize());
    DiffusionCentralityConfig cfg;
    cfg.passing_probability = o.passing;
    cfg.horizon = o.T;

    if (gendered_required && o.gendered.empty())
        throw ValidationError({"--genders is required (two comma-separated labels)"});

    json body;
    if (!o.gendered.empty()) {
        auto labels = split_list(o.gendered);
        if (labels.size() != 2)
            throw ValidationError({"expected exactly two gender labels, got '" + o.gendered + "'"});
        if (o.nodes.empty())
            throw ValidationError({"gendered centrality needs --nodes for the gender attribute"});
        auto b = load_bundle(run, o.nodes, o.edges);
        auto base = contract_basic(b.network, b.partition);
        auto ga = contract_gendered(b.network, b.partition, b.attributes, labels[0]);
        auto gb = contract_gendered(b.network, b.partition, b.attributes, labels[1]);
        auto rep = gendered_dc_correlation(base, ga, gb, cfg);
        body = {{"genders", labels},
                {"horizon_used", rep.horizon_used},
                {"base_vs_a", rank_json(rep.base_vs_a)},
                {"base_vs_b", rank_json(rep.base_vs_b)},
                {"a_vs_b", rank_json(rep.a_vs_b)},
                {"parameters", run.params}};
    } else {
        IndividualNetwork net;
        if (!o.nodes.empty()) {
            net = load_bundle(run, o.nodes, o.edges).network;
        } else {
            net = load_edge_network(run, o.edges);
        }
        auto result = diffusion_centrality(adjacency_of(net), cfg);
        json scores = json::object();
        for (int v = 0; v < net.node_count(); ++v)
            scores[net.node_id(v)] = result.scores[static_cast<size_t>(v)];
        body = {{"horizon_used", result.horizon_used},
                {"passing_probability", o.passing},
                {"scores", scores},
                {"parameters", run.params}};
    }

    if (!o.out.empty()) {
        run.emit(o.out, body.dump(2) + "\n");
        run.finish();
    } else {
        run.finish(&std::cout, body);
    }
}

void setup_dc(CLI::App& app) {
    auto o = std::make_shared<DcOpts>();
    auto cmd = std::make_shared<Cmd>(app, "dc", "diffusion centrality scores");
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--nodes", o->nodes, "nodes",
                "node CSV (optional; omit to derive the node set from the edges)");
    cmd->option("--T", o->T, "T", "horizon (0 = diameter of the largest component)");
    cmd->option("--passing", o->passing, "passing", "per-step passing probability");
    cmd->option("--gendered", o->gendered, "gendered",
                "two gender labels A,B: correlate base vs gendered household rankings");
    cmd->option("--out", o->out, "out", "output JSON (default: stdout)");
    cmd->sub()->callback([o, cmd] { run_dc(*cmd, *o, false); });
}

void setup_dc_gendered(CLI::App& app) {
    auto o = std::make_shared<DcOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "dc-gendered",
        "rank correlations between base and gender-restricted household centralities");
    cmd->option("--nodes", o->nodes, "nodes", "node CSV", true);
    cmd->option("--edges", o->edges, "edges", "edge CSV", true);
    cmd->option("--genders", o->gendered, "genders", "two comma-separated gender labels", true);
    cmd->option("--T", o->T, "T", "horizon (0 = diameter of the largest component)");
    cmd->option("--passing", o->passing, "passing", "per-step passing probability");
    cmd->option("--out", o->out, "out", "output JSON (default: stdout)");
    cmd->sub()->callback([o, cmd] { run_dc(*cmd, *o, true); });
}

// ---------------------------------------------------------------------------
// gen-er / verify-er
// ---------------------------------------------------------------------------

struct GenErOpts {
    std::string out;
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

void run_gen_er(Cmd& cmd, GenErOpts& o) {
    Run run(cmd, cmd.finalize());
    auto net = generate_er({o.n, o.p, o.seed});
    run.emit(o.out, edges_csv_text(net));
    run.finish();
}

void setup_gen_er(CLI::App& app) {
    auto o = std::make_shared<GenErOpts>();
    auto cmd = std::make_shared<Cmd>(app, "gen-er", "sample an Erdos-Renyi graph G(n, p)");
    cmd->option("--n", o->n, "n", "node count", true);
    cmd->option("--p", o->p, "p", "edge probability", true);
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output edge CSV", true);
    cmd->sub()->callback([o, cmd] { run_gen_er(*cmd, *o); });
}

struct VerifyErOpts {
    std::string sizes, out;
    int n = 0, draws = 1000;
    double p = 0.0, z_threshold = 4.0;
    std::uint64_t seed = 0;
};

std::vector<int> cycled_sizes(const std::string& pattern_csv, int n) {
    auto parts = split_list(pattern_csv);
    std::vector<int> pattern;
    for (const auto& s : parts) {
        try {
            size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size() || v < 1) throw std::invalid_argument(s);
            pattern.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError({"household sizes must be positive integers, got '" + s + "'"});
        }
    }
    if (pattern.empty()) throw ValidationError({"--sizes must not be empty"});
    // the pattern repeats cyclically until it covers n nodes exactly
    std::vector<int> sizes;
    int total = 0;
    for (size_t i = 0; total < n; ++i) {
        int v = pattern[i % pattern.size()];
        sizes.push_back(v);
        total += v;
    }
    if (total != n)
        throw ValidationError({"size pattern does not tile " + std::to_string(n) +
                               " nodes (reached " + std::to_string(total) + ")"});
    return sizes;
}

void run_verify_er(Cmd& cmd, VerifyErOpts& o) {
    Run run(cmd, cmd.finalize());
    VerifyConfig cfg;
    cfg.n = o.n;
    cfg.p = o.p;
    cfg.sizes = cycled_sizes(o.sizes, o.n);
    cfg.draws = o.draws;
    cfg.z_threshold = o.z_threshold;
    cfg.seed = o.seed;
    auto rep = verify_contraction_distribution(cfg, Exec::parallel);

    json pairs = json::array();
    for (const auto& c : rep.pairs)
        pairs.push_back({{"q", c.q},
                         {"r", c.r},
                         {"theoretical", c.theoretical},
                         {"empirical", c.empirical},
                         {"z", std::isfinite(c.z) ? json(c.z) : json()}});
    json degrees = json::array();
    for (const auto& c : rep.degrees)
        degrees.push_back({{"household", c.household},
                           {"theoretical", c.theoretical},
                           {"empirical", c.empirical},
                           {"z", std::isfinite(c.z) ? json(c.z) : json()}});
    json classes = json::array();
    for (const auto& c : rep.size_classes)
        classes.push_back({{"size_lo", c.size_lo},
                           {"size_hi", c.size_hi},
                           {"pair_count", c.pair_count},
                           {"pooled_rate", c.pooled_rate},
                           {"chi_square", std::isfinite(c.chi_square) ? json(c.chi_square) : json()},
                           {"dof", c.dof},
                           {"p_value", c.p_value}});
    json body = {{"n", o.n},
                 {"p", o.p},
                 {"sizes", cfg.sizes},
                 {"draws", rep.draws},
                 {"z_threshold", rep.z_threshold},
                 {"max_abs_z", rep.max_abs_z},
                 {"pass", rep.pass},
                 {"note", rep.note},
                 {"pairs", pairs},
                 {"degrees", degrees},
                 {"size_classes", classes},
                 {"parameters", run.params}};
    run.emit(o.out, body.dump(2) + "\n");
    run.finish();
}

void setup_verify_er(CLI::App& app) {
    auto o = std::make_shared<VerifyErOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "verify-er",
        "compare contracted ER household-pair frequencies against the closed form");
    cmd->option("--n", o->n, "n", "node count", true);
    cmd->option("--p", o->p, "p", "edge probability", true);
    cmd->option("--sizes", o->sizes, "sizes",
                "household size pattern, cycled until it covers n nodes", true);
    cmd->option("--draws", o->draws, "draws", "number of sampled graphs");
    cmd->option("--z-threshold", o->z_threshold, "z_threshold", "pass/fail bound on max |z|");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output report JSON", true);
    cmd->sub()->callback([o, cmd] { run_verify_er(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// recommend
// ---------------------------------------------------------------------------

struct RecommendOpts {
    std::string answers, out;
    bool interactive = false;
};

json answers_json(const CriteriaAnswers& a) {
    auto b = [](const std::optional<bool>& v) { return v ? json(*v) : json(); };
    return {{"proximity", b(a.proximity)},
            {"similarity", b(a.similarity)},
            {"common_fate", b(a.common_fate)},
            {"internal_diffusion", b(a.internal_diffusion)},
            {"similarity_dimension", opt_json(a.similarity_dimension)},
            {"rationale", a.rationale}};
}

void run_recommend(Cmd& cmd, RecommendOpts& o) {
    Run run(cmd, cmd.finalize());
    if (o.interactive && !o.answers.empty())
        throw ValidationError({"--answers and --interactive are mutually exclusive"});
    if (!o.interactive && o.answers.empty())
        throw ValidationError({"pass --answers <file> or --interactive"});

    CriteriaAnswers answers;
    if (o.interactive) {
        answers = run_wizard(std::cout, std::cin);
    } else {
        run.note_input(o.answers);
        answers = parse_criteria_json(read_file(o.answers));
    }
    auto rec = recommend(answers);

    json trace = json::array();
    for (const auto& s : rec.trace)
        trace.push_back({{"criterion", s.criterion}, {"answer", s.answer}, {"branch", s.branch}});
    json body = {{"level", name_of(rec.level)},
                 {"edge_weighting", name_of(rec.edge_weighting)},
                 {"weighting_dimension", opt_json(rec.weighting_dimension)},
                 {"intrahousehold_policy", name_of(rec.intrahousehold_policy)},
                 {"node_scope", name_of(rec.node_scope)},
                 {"scope_label", opt_json(rec.scope_label)},
                 {"illusion_flag", rec.illusion_flag},
                 {"trace", trace},
                 {"answers", answers_json(answers)}};
    if (!o.out.empty()) {
        run.emit(o.out, body.dump(2) + "\n");
        run.finish();
    } else {
        run.finish(&std::cout, body);
    }
}

void setup_recommend(CLI::App& app) {
    auto o = std::make_shared<RecommendOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "recommend", "entitativity questionnaire: recommended analysis network");
    cmd->option("--answers", o->answers, "answers", "answers JSON file");
    cmd->flag("--interactive", o->interactive, "interactive", "ask the questions on the terminal");
    cmd->option("--out", o->out, "out", "output JSON (default: stdout)");
    cmd->sub()->callback([o, cmd] { run_recommend(*cmd, *o); });
}

// ---------------------------------------------------------------------------
// batch
// ---------------------------------------------------------------------------

struct BatchOpts {
    std::string villages, op, out, genders = "F,M";
    int k = 10, reps = 1000, T = 0;
    double q = 0.05, intra = 0.7, passing = 1.0;
    std::uint64_t seed = 0;
};

std::string opt_cell(const std::optional<double>& v) { return v ? csv_cell(*v) : ""; }

void run_batch(Cmd& cmd, BatchOpts& o) {
    Run run(cmd, cmd.finalize());
    const std::set<std::string> ops = {"metrics", "seed-overlap", "dc-gendered"};
    if (!ops.count(o.op))
        throw ValidationError({"unknown op '" + o.op + "' (expected metrics|seed-overlap|dc-gendered)"});

    auto report = ingest_village_bundles(o.villages);
    for (const auto& v : report.villages) {
        run.note_input((fs::path(o.villages) / (v.id + "_nodes.csv")).string());
        run.note_input((fs::path(o.villages) / (v.id + "_edges.csv")).string());
    }
    for (const auto& s : report.skipped)
        run.skipped.push_back({{"village", s.id}, {"reason", s.reason}});

    const int count = static_cast<int>(report.villages.size());
    std::vector<std::string> rows(static_cast<size_t>(count));
    std::vector<std::pair<std::string, std::string>> failures(static_cast<size_t>(count));

    auto opt_metric = [](auto&& call) -> std::optional<double> {
        try {
            return call();
        } catch (const DegeneracyError&) {
            return std::nullopt;
        }
    };

    auto one_village = [&](int idx) {
        const auto& village = report.villages[static_cast<size_t>(idx)];
        const auto& b = village.bundle;
        std::ostringstream row;
        try {
            if (o.op == "metrics") {
                auto hh = contract_basic(b.network, b.partition);
                auto pi = b.network.simple_pairs();
                auto ph = hh.simple_pairs();
                int ni = b.network.node_count(), nh = hh.household_count();
                auto cell = [&](const char* metric, std::optional<double> iv,
                                std::optional<double> hv) {
                    row << village.id << ',' << metric << ',' << opt_cell(iv) << ','
                        << opt_cell(hv) << "\n";
                };
                cell("assortativity", opt_metric([&] { return degree_assortativity(ni, pi); }),
                     opt_metric([&] { return degree_assortativity(nh, ph); }));
                cell("clustering", opt_metric([&] { return average_clustering(ni, pi); }),
                     opt_metric([&] { return average_clustering(nh, ph); }));
                cell("inversity", opt_metric([&] { return inversity(ni, pi); }),
                     opt_metric([&] { return inversity(nh, ph); }));
                cell("intrahousehold_edge_proportion",
                     opt_metric([&]() -> std::optional<double> {
                         return intrahousehold_edge_proportion(decompose(b.network, b.partition));
                     }),
                     std::nullopt);
            } else if (o.op == "seed-overlap") {
                CascadeConfig cfg;
                cfg.extra_prob = o.q;
                cfg.intra_prob = o.intra;
                cfg.replications = o.reps;
                cfg.seed = o.seed;
                int k = std::min({o.k, b.network.node_count(), b.partition.household_count()});
                if (k < 1) throw ValidationError({"village has no nodes"});
                auto cmp = compare_seed_sets(b, k, cfg);
                row << village.id << ',' << k << ',' << csv_cell(cmp.overlap) << "\n";
            } else {
                auto labels = split_list(o.genders);
                if (labels.size() != 2)
                    throw ValidationError({"--genders must name two labels"});
                DiffusionCentralityConfig cfg;
                cfg.passing_probability = o.passing;
                cfg.horizon = o.T;
                auto base = contract_basic(b.network, b.partition);
                auto ga = contract_gendered(b.network, b.partition, b.attributes, labels[0]);
                auto gb = contract_gendered(b.network, b.partition, b.attributes, labels[1]);
                auto rep = gendered_dc_correlation(base, ga, gb, cfg);
                row << village.id << ',' << rep.horizon_used << ','
                    << opt_cell(rep.base_vs_a.spearman) << ',' << rep.base_vs_a.overlap << ','
                    << opt_cell(rep.base_vs_b.spearman) << ',' << rep.base_vs_b.overlap << ','
                    << opt_cell(rep.a_vs_b.spearman) << ',' << rep.a_vs_b.overlap << "\n";
            }
            rows[static_cast<size_t>(idx)] = row.str();
        } catch (const std::exception& e) {
            failures[static_cast<size_t>(idx)] = {village.id, e.what()};
        }
    };

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) one_village(i);

    std::ostringstream out;
    if (o.op == "metrics") out << "village,metric,individual,household\n";
    else if (o.op == "seed-overlap") out << "village,k,overlap\n";
    else
        out << "village,horizon,spearman_base_vs_a,overlap_base_vs_a,spearman_base_vs_b,"
               "overlap_base_vs_b,spearman_a_vs_b,overlap_a_vs_b\n";
    for (int i = 0; i < count; ++i) {
        if (!failures[static_cast<size_t>(i)].first.empty())
            run.skipped.push_back({{"village", failures[static_cast<size_t>(i)].first},
                                   {"reason", failures[static_cast<size_t>(i)].second}});
        else
            out << rows[static_cast<size_t>(i)];
    }
    run.emit(o.out, out.str());
    run.finish();
}

void setup_batch(CLI::App& app) {
    auto o = std::make_shared<BatchOpts>();
    auto cmd = std::make_shared<Cmd>(
        app, "batch", "run one analysis over a directory of per-village CSV pairs");
    cmd->option("--villages", o->villages, "villages",
                "directory of <village>_nodes.csv / <village>_edges.csv pairs", true);
    cmd->option("--op", o->op, "op", "metrics | seed-overlap | dc-gendered", true);
    cmd->option("--k", o->k, "k", "seed budget (seed-overlap)");
    cmd->option("--q", o->q, "q", "cross-household transmission probability (seed-overlap)");
    cmd->option("--intra", o->intra, "intra", "within-household transmission probability");
    cmd->option("--reps", o->reps, "reps", "cascade replications (seed-overlap)");
    cmd->option("--T", o->T, "T", "centrality horizon (dc-gendered; 0 = auto)");
    cmd->option("--passing", o->passing, "passing", "per-step passing probability (dc-gendered)");
    cmd->option("--genders", o->genders, "genders", "two labels for dc-gendered");
    cmd->seed_option(o->seed);
    cmd->option("--out", o->out, "out", "output CSV", true);
    cmd->sub()->callback([o, cmd] { run_batch(*cmd, *o); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"household-network construction, metrics, diffusion, and verification"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    setup_contract(app);
    setup_metrics(app);
    setup_sweep(app);
    setup_cascade(app);
    setup_seeds(app);
    setup_compare_seeds(app);
    setup_cross_eval(app);
    setup_dc(app);
    setup_dc_gendered(app);
    setup_gen_er(app);
    setup_verify_er(app);
    setup_recommend(app);
    setup_batch(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid input\n";
        for (const auto& issue : e.issues()) std::cerr << "  - " << issue << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
