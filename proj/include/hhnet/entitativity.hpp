#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhnet/contraction.hpp"
#include "hhnet/diffusion.hpp"
#include "hhnet/graph.hpp"

namespace hhnet {

// ---------------------------------------------------------------------------
// Criteria and recommendation
// ---------------------------------------------------------------------------

// Answers to the four entitativity criteria. Partial answer sets are
// representable (for incremental wizards) but recommend() rejects them.
struct CriteriaAnswers {
    std::optional<bool> proximity;
    std::optional<bool> similarity;
    std::optional<bool> common_fate;
    std::optional<bool> internal_diffusion;
    std::optional<std::string> similarity_dimension;  // e.g. "gender"
    std::map<std::string, std::string> rationale;     // criterion -> free text
};

enum class AnalysisLevel { individual, household };

// reported_strength and full_clique are part of the downstream vocabulary
// (callers may override toward them); the decision tree itself never emits
// them.
enum class EdgeWeighting { unweighted, similarity_weighted, reported_strength };
enum class IntrahouseholdPolicy { full_clique, reported_only, excluded };
enum class NodeScopeKind { all, role_subgroup };

const char* name_of(AnalysisLevel v);
const char* name_of(EdgeWeighting v);
const char* name_of(IntrahouseholdPolicy v);
const char* name_of(NodeScopeKind v);

struct TraceStep {
    std::string criterion;
    std::string answer;
    std::string branch;
};

struct Recommendation {
    AnalysisLevel level = AnalysisLevel::individual;
    EdgeWeighting edge_weighting = EdgeWeighting::unweighted;
    std::optional<std::string> weighting_dimension;  // set with similarity_weighted
    IntrahouseholdPolicy intrahousehold_policy = IntrahouseholdPolicy::reported_only;
    NodeScopeKind node_scope = NodeScopeKind::all;
    std::optional<std::string> scope_label;  // set with role_subgroup
    bool illusion_flag = false;
    std::vector<TraceStep> trace;
};

// Deterministic decision tree over the four criteria:
//   proximity no                      -> individual level
//   proximity yes, no internal diffusion -> individual level, intrahousehold
//       edges kept only as reported; without similarity the edges get
//       similarity-dimension weights; with similarity but no common fate the
//       node scope narrows to the role subgroup
//   proximity yes, internal diffusion -> household level; unweighted when
//       members are similar, similarity-weighted contraction otherwise
// The illusion flag is raised whenever proximity holds but a criterion
// consulted on the chosen path does not. Throws ValidationError listing
// every missing criterion or rationale.
Recommendation recommend(const CriteriaAnswers& answers);

// ---------------------------------------------------------------------------
// Consistent-metrics side check
// ---------------------------------------------------------------------------

enum class ConsistencyMetric { assortativity, clustering, inversity, dc_ranking, seed_overlap };
enum class ComparisonMode { sign, ranking, overlap };

const char* name_of(ConsistencyMetric v);
const char* name_of(ComparisonMode v);

// sign for the scalar metrics, ranking for centrality, overlap for seeds
ComparisonMode default_mode(ConsistencyMetric metric);

struct ConsistencyConfig {
    double spearman_threshold = 0.7;
    double overlap_threshold = 0.5;
    int seed_budget = 10;  // clamped to the smaller network when needed
    CascadeConfig cascade;
    DiffusionCentralityConfig centrality;
};

struct ConsistencyReport {
    ConsistencyMetric metric = ConsistencyMetric::assortativity;
    ComparisonMode mode = ComparisonMode::sign;
    bool consistent = false;
    bool vacuous = false;  // undefined on both sides counts as consistent
    std::optional<double> individual_value;  // sign mode
    std::optional<double> household_value;   // sign mode
    std::optional<double> statistic;         // ranking / overlap modes
    double threshold = 0.0;
    std::string detail;
};

// Does the metric tell the same qualitative story on both representations?
// Sign mode compares signs (both undefined is vacuously consistent, exactly
// one undefined is not). Ranking mode sums individual diffusion-centrality
// scores per household and rank-correlates them against the household
// network's own scores. Overlap mode compares greedy seed sets after
// mapping the person picks up to households.
ConsistencyReport consistent_metrics_check(const NetworkBundle& bundle,
                                           const HouseholdNetwork& household,
                                           ConsistencyMetric metric,
                                           std::optional<ComparisonMode> mode = std::nullopt,
                                           const ConsistencyConfig& config = {},
                                           Exec exec = Exec::serial);

// ---------------------------------------------------------------------------
// Questionnaire front ends
// ---------------------------------------------------------------------------

// Line-oriented questionnaire: for each criterion the response source
// supplies a yes/no line and a non-empty rationale line; similarity takes a
// third line naming the dimension (may be left blank). Prompts go to the
// sink, so the same function drives terminals and scripted transcripts.
// Errors cite the offending response line number.
CriteriaAnswers run_wizard(std::ostream& prompts, std::istream& responses);

// Answers-file form: {proximity, similarity, similarity_dimension?,
// common_fate, internal_diffusion, rationale: {criterion: text}}.
// Malformed JSON is reported with a line number; missing fields are
// aggregated into one error.
CriteriaAnswers parse_criteria_json(const std::string& text);

}  // namespace hhnet
