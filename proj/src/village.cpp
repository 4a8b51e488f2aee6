#include "hhnet/village.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "hhnet/errors.hpp"

namespace fs = std::filesystem;

namespace hhnet {

namespace {

bool strip_suffix(const std::string& name, const std::string& suffix, std::string& id) {
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) return false;
    id = name.substr(0, name.size() - suffix.size());
    return true;
}

}  // namespace

IngestReport ingest_village_bundles(const std::string& directory) {
    std::error_code ec;
    if (!fs::is_directory(directory, ec))
        throw IoError(directory + ": not a directory");

    std::set<std::string> node_ids, edge_ids;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        std::string id;
        if (strip_suffix(name, "_nodes.csv", id)) node_ids.insert(id);
        else if (strip_suffix(name, "_edges.csv", id)) edge_ids.insert(id);
    }

    std::set<std::string> all_ids = node_ids;
    all_ids.insert(edge_ids.begin(), edge_ids.end());
    if (all_ids.empty())
        throw ValidationError({directory + ": no <village>_nodes.csv / <village>_edges.csv pairs"});

    IngestReport report;
    for (const auto& id : all_ids) {
        if (!node_ids.count(id)) {
            report.skipped.push_back({id, "missing " + id + "_nodes.csv"});
            continue;
        }
        if (!edge_ids.count(id)) {
            report.skipped.push_back({id, "missing " + id + "_edges.csv"});
            continue;
        }
        fs::path base(directory);
        try {
            auto nodes = load_nodes_csv((base / (id + "_nodes.csv")).string());
            auto edges = load_edges_csv((base / (id + "_edges.csv")).string());
            report.villages.push_back({id, build_network(nodes, edges)});
        } catch (const std::exception& e) {
            report.skipped.push_back({id, e.what()});
        }
    }
    return report;
}

}  // namespace hhnet
