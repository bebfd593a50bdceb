#pragma once
// Validation and line-delimited serialization for all persistent records.
//
// File layout: one JSON object per line, preceded by a single header record
// carrying the schema version. Keys are emitted in a fixed order, so identical
// inputs always produce byte-identical files.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rolebreak/types.hpp"

namespace rolebreak {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "rolebreakeval/1";

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Returns the list of violated invariants; empty list means the record is valid.
std::vector<std::string> validate_role_card(const RoleCard& card);

// Conditional invariants need the owning role; pass nullptr when it is not at hand
// (the language-difference check is then skipped).
std::vector<std::string> validate_attack_query(const AttackQuery& query, const RoleCard* owner);

std::vector<std::string> validate_transcript(const Transcript& transcript, int max_iterations);

std::vector<std::string> validate_eval_record(const EvalRecord& record);

// --- record <-> JSON, fixed key order ---

ordered_json role_to_json(const RoleCard& card);
RoleCard role_from_json(const ordered_json& j);
ordered_json query_to_json(const AttackQuery& query);
AttackQuery query_from_json(const ordered_json& j);
ordered_json transcript_to_json(const Transcript& transcript);
Transcript transcript_from_json(const ordered_json& j);
ordered_json eval_record_to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const ordered_json& j);

// --- dataset files (roles + queries) ---

struct Dataset {
    std::vector<RoleCard> roles;
    std::vector<AttackQuery> queries;
};

// Loads and fully validates a dataset file: record invariants, the conditional
// per-pattern invariants, and referential integrity of every query's role_id.
// Throws DatasetError naming the offending line or query ids.
Dataset load_dataset(const std::filesystem::path& path);

// Writes records in the given order. Pure function of its input.
void save_dataset(const std::vector<RoleCard>& roles, const std::vector<AttackQuery>& queries,
                  const std::filesystem::path& path);

// --- transcript / eval files ---

std::vector<Transcript> load_transcripts(const std::filesystem::path& path);
void save_transcripts(const std::vector<Transcript>& transcripts, const std::filesystem::path& path);
std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path);
void save_eval_records(const std::vector<EvalRecord>& records, const std::filesystem::path& path);

// --- low-level JSONL plumbing ---

// Reads every record line of a JSONL file, checking the header. When
// tolerate_torn_tail is set, an unparseable final line (an interrupted write)
// is dropped instead of raising.
std::vector<ordered_json> read_jsonl(const std::filesystem::path& path, const std::string& kind,
                                     bool tolerate_torn_tail = false);

// Incremental JSONL writer used by resumable commands. Lines are flushed as
// they are appended so an interrupted run loses at most its torn last line.
class JsonlWriter {
  public:
    JsonlWriter() = default;
    // Opens for append when the file already has a valid header, otherwise
    // truncates and writes a fresh header.
    void open(const std::filesystem::path& path, const std::string& kind);
    void append(const ordered_json& record);
    void close();
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    FILE* file_ = nullptr;
};

ordered_json make_header(const std::string& kind);

}  // namespace rolebreak
