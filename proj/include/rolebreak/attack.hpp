#pragma once
// The four query-construction strategies plus role anonymization.
//
// Generation parsers are strict about the stems the prompts demand
// ("Query <k>:" / "[Domain] Query <k>:"); every rejected line is kept with its
// reason so the curation manifest can surface it to a human reviewer.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rolebreak/prompts.hpp"
#include "rolebreak/provider.hpp"
#include "rolebreak/types.hpp"

namespace rolebreak {

// A completion that yielded no usable queries; carries the raw text.
struct GenerationParseError : std::runtime_error {
    GenerationParseError(const std::string& message, std::string raw)
        : std::runtime_error(message), raw_completion(std::move(raw)) {}
    std::string raw_completion;
};

struct AnonymizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RejectedLine {
    std::string line;
    std::string reason;
};

struct GeneratedQueries {
    std::vector<AttackQuery> queries;
    std::vector<std::string> raw_lines;  // parallel to queries: the source line each came from
    std::vector<RejectedLine> rejected;
};

struct RoleEmbeddingIndex {
    struct Entry {
        std::string role_id;
        EmbeddingVector embedding;
    };
    std::vector<Entry> entries;
    std::string model_id;

    bool contains(const std::string& role_id) const;
    const Entry& entry(const std::string& role_id) const;
};

// Renders the multidomain prompt, parses "[<Domain>] Query <k>: <text>" lines,
// and keeps at most n queries. Unknown domains and repeated domains are
// rejected per line. Zero parseable lines raises GenerationParseError.
GeneratedQueries generate_multidomain(ProviderClient& client, const PromptCatalog& catalog,
                                      const RoleCard& role, int n);

struct TranslationResult {
    AttackQuery query;
    std::string raw_completion;
    bool identical_to_source = false;  // suspect, surfaced in the manifest
};

TranslationResult rewrite_multilingual(ProviderClient& client, const PromptCatalog& catalog,
                                       const RoleCard& role, const AttackQuery& query,
                                       const std::string& target_language_code,
                                       const std::string& target_language_name);

// Requires role.wiki_text; parses "Query <k>: <text>" lines, ignoring prose
// around them.
GeneratedQueries mine_omissions(ProviderClient& client, const PromptCatalog& catalog,
                                const RoleCard& role, int n);

// One embedding per role description, all from the same model.
RoleEmbeddingIndex build_embedding_index(ProviderClient& client,
                                         const std::vector<RoleCard>& roles);

// The k most similar other roles, by descending cosine similarity; ties broken
// by ascending role_id. Requires 1 <= k < number of roles.
std::vector<std::pair<std::string, double>> nearest_roles(const RoleEmbeddingIndex& index,
                                                          const std::string& role_id, int k);

// Reassigns an Original query to its single nearest adjacent role.
AttackQuery perturb_role(const AttackQuery& query, const RoleEmbeddingIndex& index);

// Replaces every name-variant occurrence (case-insensitive, word-boundary
// aware, longest variant first) with `alias`.
std::string anonymize_text(const std::string& text, std::vector<std::string> variants,
                           const std::string& alias);

// Derives a deterministic brace-wrapped hex alias from (canonical_name, salt)
// and rewrites description and wiki_text. Fails closed: any residual
// case-insensitive occurrence of a name variant raises AnonymizationError.
RoleCard anonymize_role(const RoleCard& role, const std::string& salt);

// Anonymizes a whole corpus, deterministically lengthening the salt for any
// role whose alias would collide with an earlier one.
std::vector<RoleCard> anonymize_roles(std::vector<RoleCard> roles, const std::string& salt);

struct AttackGenConfig {
    int multidomain_per_role = 10;
    int omission_per_role = 5;
    int translate_per_role = 5;
    int perturb_per_role = 0;
    std::string target_language_code = "zh";
    std::string target_language_name = "Chinese";
    std::string anonymize_salt = "rolebreak";
};

struct ManifestRow {
    std::optional<std::string> query_id;  // absent for rejected lines
    std::string role_id;
    std::string pattern;
    std::string raw_source;
    bool keep = true;
    std::string note;
};

struct AttackDataset {
    std::vector<RoleCard> roles;  // anonymized, sorted by id
    std::vector<AttackQuery> queries;
    std::vector<ManifestRow> manifest;
    std::vector<std::string> failures;  // per-role failure notes; never silently dropped
};

// Runs every configured strategy per role, anonymizes the corpus (query texts
// included), and assembles a dataset ready for save_dataset. Per-role failures
// are aggregated; the partial dataset is still returned.
AttackDataset build_attack_dataset(ProviderClient& client, const PromptCatalog& catalog,
                                   const std::vector<RoleCard>& roles,
                                   const std::vector<AttackQuery>& original_queries,
                                   const AttackGenConfig& config, int concurrency = 4);

}  // namespace rolebreak
