#pragma once
// Persistent domain types shared by the whole harness.
//
// All types are immutable value objects once constructed; they carry no
// behavior beyond small accessors so they can be shared freely across threads.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rolebreak {

enum class AttackPattern {
    Original,
    MultidomainSpec,
    MultilingualRewrite,
    OmissionMining,
    RolePerturbation,
};

enum class Strategy {
    Plain,
    Narrator,
};

std::string to_string(AttackPattern pattern);
AttackPattern attack_pattern_from_string(const std::string& name);
std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

// The fixed 20-domain list used by multidomain query generation.
// Order matters: it mirrors the generation prompt's catalog.
const std::array<std::string, 20>& domain_catalog();
bool domain_in_catalog(const std::string& domain);

// A persona under test.
struct RoleCard {
    std::string id;                            // content hash of canonical_name
    std::string canonical_name;
    std::vector<std::string> name_variants;    // every surface form that must not leak
    std::string description;                   // the role-setting used in prompts
    std::optional<std::string> wiki_text;      // long-form biography, feeds omission mining
    std::optional<std::string> alias;          // brace-wrapped anonymization token
    std::string language = "en";

    // Name rendered into prompts: the alias once anonymized, else the real name.
    const std::string& display_name() const { return alias ? *alias : canonical_name; }
};

// One adversarial query, tagged with the construction strategy that produced it.
struct AttackQuery {
    std::string id;                            // content hash of (role_id, pattern, text)
    std::string role_id;
    std::string text;
    AttackPattern pattern = AttackPattern::Original;
    std::optional<std::string> domain_tag;     // MultidomainSpec only
    std::optional<std::string> source_role_id; // RolePerturbation only
    std::string language = "en";
};

// One defense run over one query: final response plus all narrator artifacts.
struct Transcript {
    std::string id;                            // content hash of (query_id, strategy label)
    std::string query_id;
    std::string role_id;
    Strategy strategy = Strategy::Plain;
    bool outline_enabled = false;
    bool plot_enabled = false;
    bool verify_enabled = false;
    std::optional<std::string> global_outline;
    std::optional<std::string> local_plot;
    std::vector<std::string> draft_responses;  // every draft, in generation order
    std::vector<std::string> verify_outputs;   // raw verifier completions, per round
    std::string final_response;
    bool verified = false;
    int iterations_used = 0;                   // verification rounds executed
    std::string provider_fingerprint;
    std::vector<std::string> template_overrides;

    std::string strategy_label() const;
};

// Per-transcript judge verdicts for the four metrics.
struct EvalRecord {
    std::string transcript_id;
    std::optional<bool> hallucinated;                 // HR
    std::optional<std::string> rf_choice;             // RF: chosen letter
    std::optional<bool> rf_correct;
    std::optional<std::string> qf_choice;             // QF: chosen letter
    std::optional<bool> qf_correct;
    std::optional<int> sc_score;                      // SC: 1..5
    std::map<std::string, std::string> raw_judge_outputs;  // metric -> verbatim judge text
    std::vector<std::string> parse_failures;          // metrics whose verdict is absent

    // Audit trail for the multiple-choice metrics.
    std::vector<std::string> rf_options;
    std::optional<std::string> rf_target;
    std::optional<uint32_t> rf_seed;
    std::vector<std::string> qf_options;
    std::optional<std::string> qf_target;
    std::optional<uint32_t> qf_seed;
    bool qf_fallback = false;                         // distractors drawn corpus-wide
};

// Campaign-level aggregates. A metric with zero parseable verdicts is absent,
// never reported as zero.
struct MetricsSummary {
    std::optional<double> hr;
    std::optional<double> rf;
    std::optional<double> qf;
    std::optional<double> sc;
    int n_records = 0;
    int hr_excluded = 0;
    int rf_excluded = 0;
    int qf_excluded = 0;
    int sc_excluded = 0;
};

}  // namespace rolebreak
