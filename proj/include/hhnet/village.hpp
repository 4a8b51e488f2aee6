#pragma once

#include <string>
#include <vector>

#include "hhnet/graph.hpp"

namespace hhnet {

struct VillageBundle {
    std::string id;
    NetworkBundle bundle;
};

struct SkippedVillage {
    std::string id;
    std::string reason;
};

struct IngestReport {
    std::vector<VillageBundle> villages;  // sorted by id
    std::vector<SkippedVillage> skipped;
};

// Scans a directory for `<id>_nodes.csv` / `<id>_edges.csv` pairs and builds
// one bundle per village. Villages that fail validation (or lack one half of
// the pair) land in `skipped` with the reason; they never abort the batch.
// A directory containing no village files at all is an error. Results are
// sorted by id, so downstream batch output is independent of directory
// enumeration order.
IngestReport ingest_village_bundles(const std::string& directory);

}  // namespace hhnet
