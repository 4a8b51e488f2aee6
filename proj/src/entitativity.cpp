#include "hhnet/entitativity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hhnet/errors.hpp"
#include "hhnet/metrics.hpp"
#include "hhnet/stats.hpp"

namespace hhnet {

const char* name_of(AnalysisLevel v) {
    return v == AnalysisLevel::individual ? "individual" : "household";
}

const char* name_of(EdgeWeighting v) {
    switch (v) {
        case EdgeWeighting::unweighted: return "unweighted";
        case EdgeWeighting::similarity_weighted: return "similarity-weighted";
        case EdgeWeighting::reported_strength: return "reported-strength";
    }
    return "?";
}

const char* name_of(IntrahouseholdPolicy v) {
    switch (v) {
        case IntrahouseholdPolicy::full_clique: return "full-clique";
        case IntrahouseholdPolicy::reported_only: return "reported-only";
        case IntrahouseholdPolicy::excluded: return "excluded";
    }
    return "?";
}

const char* name_of(NodeScopeKind v) {
    return v == NodeScopeKind::all ? "all" : "role-subgroup";
}

const char* name_of(ConsistencyMetric v) {
    switch (v) {
        case ConsistencyMetric::assortativity: return "assortativity";
        case ConsistencyMetric::clustering: return "clustering";
        case ConsistencyMetric::inversity: return "inversity";
        case ConsistencyMetric::dc_ranking: return "diffusion-centrality-ranking";
        case ConsistencyMetric::seed_overlap: return "seed-set-overlap";
    }
    return "?";
}

const char* name_of(ComparisonMode v) {
    switch (v) {
        case ComparisonMode::sign: return "sign";
        case ComparisonMode::ranking: return "ranking";
        case ComparisonMode::overlap: return "overlap";
    }
    return "?";
}

namespace {

constexpr const char* kCriteria[] = {"proximity", "similarity", "common_fate",
                                     "internal_diffusion"};

void validate_answers(const CriteriaAnswers& a) {
    std::vector<std::string> issues;
    const std::optional<bool>* fields[] = {&a.proximity, &a.similarity, &a.common_fate,
                                           &a.internal_diffusion};
    for (size_t i = 0; i < 4; ++i) {
        if (!fields[i]->has_value())
            issues.push_back(std::string("criterion '") + kCriteria[i] + "' is unanswered");
        auto it = a.rationale.find(kCriteria[i]);
        if (it == a.rationale.end() || it->second.empty())
            issues.push_back(std::string("rationale for '") + kCriteria[i] + "' is missing");
    }
    if (!issues.empty()) throw ValidationError(issues);
}

void step(Recommendation& rec, const char* criterion, bool answer, std::string branch) {
    rec.trace.push_back(TraceStep{criterion, answer ? "yes" : "no", std::move(branch)});
}

}  // namespace

Recommendation recommend(const CriteriaAnswers& answers) {
    validate_answers(answers);
    const bool proximity = *answers.proximity;
    const bool similarity = *answers.similarity;
    const bool common_fate = *answers.common_fate;
    const bool internal_diffusion = *answers.internal_diffusion;

    Recommendation rec;
    if (!proximity) {
        step(rec, "proximity", false,
             "households are not candidate entities; analyze the individual network");
        rec.level = AnalysisLevel::individual;
        rec.edge_weighting = EdgeWeighting::unweighted;
        rec.intrahousehold_policy = IntrahouseholdPolicy::reported_only;
        rec.node_scope = NodeScopeKind::all;
        rec.illusion_flag = false;
        return rec;
    }
    step(rec, "proximity", true, "the household boundary is a candidate entity");

    if (!internal_diffusion) {
        step(rec, "internal_diffusion", false,
             "individual level; keep intrahousehold edges only where reported");
        rec.level = AnalysisLevel::individual;
        rec.intrahousehold_policy = IntrahouseholdPolicy::reported_only;
        if (!similarity) {
            step(rec, "similarity", false, "weight edges along the similarity dimension");
            rec.edge_weighting = EdgeWeighting::similarity_weighted;
            rec.weighting_dimension = answers.similarity_dimension;
        } else {
            step(rec, "similarity", true, "members are interchangeable for this context");
            rec.edge_weighting = EdgeWeighting::unweighted;
            if (!common_fate) {
                step(rec, "common_fate", false, "narrow the node scope to the role subgroup");
                rec.node_scope = NodeScopeKind::role_subgroup;
                rec.scope_label = answers.similarity_dimension;
            } else {
                step(rec, "common_fate", true, "keep every node in scope");
            }
        }
    } else {
        step(rec, "internal_diffusion", true,
             "household level; contraction absorbs intrahousehold edges");
        rec.level = AnalysisLevel::household;
        rec.intrahousehold_policy = IntrahouseholdPolicy::excluded;
        if (similarity) {
            step(rec, "similarity", true, "unweighted basic contraction");
            rec.edge_weighting = EdgeWeighting::unweighted;
        } else {
            step(rec, "similarity", false, "similarity-weighted contraction");
            rec.edge_weighting = EdgeWeighting::similarity_weighted;
            rec.weighting_dimension = answers.similarity_dimension;
        }
    }

    // proximity held, but a criterion consulted on this path did not
    rec.illusion_flag = !internal_diffusion || !similarity;
    return rec;
}

ComparisonMode default_mode(ConsistencyMetric metric) {
    switch (metric) {
        case ConsistencyMetric::assortativity:
        case ConsistencyMetric::clustering:
        case ConsistencyMetric::inversity: return ComparisonMode::sign;
        case ConsistencyMetric::dc_ranking: return ComparisonMode::ranking;
        case ConsistencyMetric::seed_overlap: return ComparisonMode::overlap;
    }
    return ComparisonMode::sign;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::optional<double> try_metric(ConsistencyMetric metric, int n,
                                 const std::vector<std::pair<int, int>>& pairs) {
    try {
        switch (metric) {
            case ConsistencyMetric::assortativity: return degree_assortativity(n, pairs);
            case ConsistencyMetric::clustering: return average_clustering(n, pairs);
            case ConsistencyMetric::inversity: return inversity(n, pairs);
            default: break;
        }
    } catch (const DegeneracyError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

std::string fmt(std::optional<double> v) {
    if (!v) return "undefined";
    std::ostringstream os;
    os << *v;
    return os.str();
}

bool degenerate(const std::vector<double>& xs) {
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return xs.empty() || *lo == *hi;
}

}  // namespace

ConsistencyReport consistent_metrics_check(const NetworkBundle& bundle,
                                           const HouseholdNetwork& household,
                                           ConsistencyMetric metric,
                                           std::optional<ComparisonMode> mode,
                                           const ConsistencyConfig& config, Exec exec) {
    if (household.household_ids != bundle.partition.household_ids())
        throw ValidationError({"household network does not match the bundle's partition"});

    ConsistencyReport report;
    report.metric = metric;
    report.mode = mode.value_or(default_mode(metric));
    if (report.mode != default_mode(metric))
        throw ValidationError({std::string("comparison mode '") + name_of(report.mode) +
                               "' does not apply to metric '" + name_of(metric) + "'"});

    std::ostringstream detail;
    switch (report.mode) {
        case ComparisonMode::sign: {
            auto pi = bundle.network.simple_pairs();
            auto ph = household.simple_pairs();
            report.individual_value = try_metric(metric, bundle.network.node_count(), pi);
            report.household_value = try_metric(metric, household.household_count(), ph);
            if (!report.individual_value && !report.household_value) {
                report.consistent = true;
                report.vacuous = true;
                detail << name_of(metric) << " is undefined on both networks";
            } else if (!report.individual_value || !report.household_value) {
                report.consistent = false;
                detail << name_of(metric) << " is defined on only one network (individual "
                       << fmt(report.individual_value) << ", household "
                       << fmt(report.household_value) << ")";
            } else {
                int si = sign_of(*report.individual_value);
                int sh = sign_of(*report.household_value);
                report.consistent = si == sh;
                detail << name_of(metric) << ": individual " << fmt(report.individual_value)
                       << ", household " << fmt(report.household_value) << "; signs "
                       << (report.consistent ? "agree" : "differ");
            }
            break;
        }
        case ComparisonMode::ranking: {
            report.threshold = config.spearman_threshold;
            auto dci = diffusion_centrality(adjacency_of(bundle.network), config.centrality);
            auto dch =
                diffusion_centrality(adjacency_of(household.as_network()), config.centrality);
            std::vector<double> mapped(static_cast<size_t>(household.household_count()), 0.0);
            for (int v = 0; v < bundle.network.node_count(); ++v)
                mapped[static_cast<size_t>(bundle.partition.household_of(v))] +=
                    dci.scores[static_cast<size_t>(v)];
            if (degenerate(mapped) && degenerate(dch.scores)) {
                report.consistent = true;
                report.vacuous = true;
                detail << "both score vectors are constant; ranking comparison is vacuous";
                break;
            }
            report.statistic = spearman(mapped, dch.scores);
            if (!report.statistic) {
                report.consistent = false;
                detail << "rank correlation undefined (a score vector is constant)";
            } else {
                report.consistent = *report.statistic >= config.spearman_threshold;
                detail << "Spearman correlation of household-aggregated individual scores vs "
                          "household scores: "
                       << *report.statistic << " (threshold " << config.spearman_threshold << ")";
            }
            break;
        }
        case ComparisonMode::overlap: {
            report.threshold = config.overlap_threshold;
            auto decomposition = decompose(bundle.network, bundle.partition);
            CascadeGraph gi =
                cascade_graph(decomposition, config.cascade.extra_prob, config.cascade.intra_prob);
            CascadeGraph gh = cascade_graph(household, config.cascade.extra_prob);
            int k = std::min({config.seed_budget, gi.n, gh.n});
            if (k < 1) throw ValidationError({"seed budget must be positive"});
            GreedyResult ri = greedy_seed_selection(gi, k, config.cascade, exec);
            GreedyResult rh = greedy_seed_selection(gh, k, config.cascade, exec);
            std::vector<std::string> person_ids;
            for (int v : ri.seeds) person_ids.push_back(gi.labels[static_cast<size_t>(v)]);
            auto mapped = map_individuals_to_households(person_ids, bundle.partition);
            std::set<int> hh_picks(rh.seeds.begin(), rh.seeds.end());
            int shared = 0;
            for (const auto& id : mapped)
                if (hh_picks.count(household.index_of(id))) ++shared;
            report.statistic =
                static_cast<double>(shared) / static_cast<double>(hh_picks.size());
            report.consistent = *report.statistic >= config.overlap_threshold;
            detail << "greedy seed sets of size " << k << " share " << shared << " of "
                   << hh_picks.size() << " households (threshold " << config.overlap_threshold
                   << ")";
            break;
        }
    }
    report.detail = detail.str();
    return report;
}

// ---------------------------------------------------------------------------
// Wizard and answers file
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct LineReader {
    std::istream& in;
    int line = 0;

    std::string next(const char* what) {
        std::string s;
        if (!std::getline(in, s))
            throw ValidationError({std::string("responses ended early at line ") +
                                   std::to_string(line + 1) + " (expected " + what + ")"});
        ++line;
        return trim(s);
    }

    bool yes_no(const char* criterion) {
        std::string s = lower(next("yes or no"));
        if (s == "yes" || s == "y") return true;
        if (s == "no" || s == "n") return false;
        throw ValidationError({std::string("responses line ") + std::to_string(line) + " (" +
                               criterion + "): expected yes or no, got '" + s + "'"});
    }

    std::string rationale(const char* criterion) {
        std::string s = next("a rationale");
        if (s.empty())
            throw ValidationError({std::string("responses line ") + std::to_string(line) + " (" +
                                   criterion + "): rationale must not be empty"});
        return s;
    }
};

}  // namespace

CriteriaAnswers run_wizard(std::ostream& prompts, std::istream& responses) {
    LineReader reader{responses};
    CriteriaAnswers a;

    prompts << "Entitativity questionnaire: answer yes/no, then give a one-line rationale.\n\n";

    prompts << "[1/4] proximity\n"
            << "Do the candidate group members live together closely enough, over the\n"
            << "study's timescale, for co-residence to be a meaningful boundary? [yes/no]\n";
    a.proximity = reader.yes_no("proximity");
    prompts << "Rationale:\n";
    a.rationale["proximity"] = reader.rationale("proximity");

    prompts << "\n[2/4] similarity\n"
            << "Guiding questions:\n"
            << "  - Is there a gender-related norm, stigma, or significance regarding sharing"
               " this type of information?\n"
            << "  - Does one person in the household make financial decisions on behalf of"
               " their family that might be relevant to this experimental context?\n"
            << "  - Does the subject or outcome of the experiment lie primarily within the"
               " specialization of one household member?\n"
            << "With those in mind: are household members similar with respect to this\n"
            << "intervention? [yes/no]\n";
    a.similarity = reader.yes_no("similarity");
    prompts << "Rationale:\n";
    a.rationale["similarity"] = reader.rationale("similarity");
    prompts << "Similarity dimension, if one stands out (e.g. gender); blank to skip:\n";
    std::string dim = reader.next("a dimension or a blank line");
    if (!dim.empty()) a.similarity_dimension = dim;

    prompts << "\n[3/4] common fate\n"
            << "Does the intervention or tracked outcome apply to the household as a\n"
            << "whole, so that members share its result? [yes/no]\n";
    a.common_fate = reader.yes_no("common_fate");
    prompts << "Rationale:\n";
    a.rationale["common_fate"] = reader.rationale("common_fate");

    prompts << "\n[4/4] internal diffusion\n"
            << "Would information or treatment reaching one member spread freely to the\n"
            << "rest of the household? [yes/no]\n";
    a.internal_diffusion = reader.yes_no("internal_diffusion");
    prompts << "Rationale:\n";
    a.rationale["internal_diffusion"] = reader.rationale("internal_diffusion");

    return a;
}

CriteriaAnswers parse_criteria_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        long line = 1 + std::count(text.begin(),
                                   text.begin() + static_cast<long>(std::min(byte, text.size())),
                                   '\n');
        throw ValidationError({"answers file line " + std::to_string(line) +
                               ": malformed JSON (" + std::string(e.what()) + ")"});
    }

    std::vector<std::string> issues;
    CriteriaAnswers a;
    auto read_bool = [&](const char* key) -> std::optional<bool> {
        if (!doc.contains(key)) return std::nullopt;
        if (!doc[key].is_boolean()) {
            issues.push_back(std::string("field '") + key + "' must be a boolean");
            return std::nullopt;
        }
        return doc[key].get<bool>();
    };
    a.proximity = read_bool("proximity");
    a.similarity = read_bool("similarity");
    a.common_fate = read_bool("common_fate");
    a.internal_diffusion = read_bool("internal_diffusion");

    if (doc.contains("similarity_dimension")) {
        if (!doc["similarity_dimension"].is_string())
            issues.push_back("field 'similarity_dimension' must be a string");
        else
            a.similarity_dimension = doc["similarity_dimension"].get<std::string>();
    }
    if (doc.contains("rationale")) {
        if (!doc["rationale"].is_object())
            issues.push_back("field 'rationale' must be an object of criterion -> text");
        else
            for (const auto& [key, value] : doc["rationale"].items()) {
                if (!value.is_string())
                    issues.push_back("rationale for '" + key + "' must be a string");
                else
                    a.rationale[key] = value.get<std::string>();
            }
    }
    if (!issues.empty()) throw ValidationError(issues);
    return a;
}

}  // namespace hhnet
