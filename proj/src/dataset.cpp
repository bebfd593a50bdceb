#include "rolebreak/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace rolebreak {

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return false;
    return lower_ascii(haystack).find(lower_ascii(needle)) != std::string::npos;
}

std::optional<std::string> opt_string(const ordered_json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

ordered_json opt_to_json(const std::optional<std::string>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

std::vector<std::string> validate_role_card(const RoleCard& card) {
    std::vector<std::string> violations;
    if (card.id.empty()) violations.push_back("id empty");
    if (card.canonical_name.empty()) {
        violations.push_back("canonical_name empty");
    } else if (std::find(card.name_variants.begin(), card.name_variants.end(),
                         card.canonical_name) == card.name_variants.end()) {
        violations.push_back("canonical_name missing from name_variants");
    }
    if (card.description.empty()) violations.push_back("description empty");
    if (card.language.empty()) violations.push_back("language empty");
    if (card.alias) {
        for (const auto& variant : card.name_variants) {
            if (contains_ci(*card.alias, variant)) {
                violations.push_back("alias leaks name variant '" + variant + "'");
            }
        }
    }
    return violations;
}

std::vector<std::string> validate_attack_query(const AttackQuery& query, const RoleCard* owner) {
    std::vector<std::string> violations;
    if (query.id.empty()) violations.push_back("id empty");
    if (query.role_id.empty()) violations.push_back("role_id empty");
    if (query.text.empty()) violations.push_back("text empty");
    if (query.language.empty()) violations.push_back("language empty");

    if (query.pattern == AttackPattern::MultidomainSpec) {
        if (!query.domain_tag) {
            violations.push_back("multidomain query missing domain_tag");
        } else if (!domain_in_catalog(*query.domain_tag)) {
            violations.push_back("domain_tag '" + *query.domain_tag + "' not in catalog");
        }
    } else if (query.domain_tag) {
        violations.push_back("domain_tag set on non-multidomain query");
    }

    if (query.pattern == AttackPattern::RolePerturbation) {
        if (!query.source_role_id) {
            violations.push_back("perturbation query missing source_role_id");
        } else if (*query.source_role_id == query.role_id) {
            violations.push_back("perturbation source equals target role");
        }
    } else if (query.source_role_id) {
        violations.push_back("source_role_id set on non-perturbation query");
    }

    if (query.pattern == AttackPattern::MultilingualRewrite && owner != nullptr &&
        query.language == owner->language) {
        violations.push_back("rewrite language matches role language");
    }
    return violations;
}

std::vector<std::string> validate_transcript(const Transcript& transcript, int max_iterations) {
    std::vector<std::string> violations;
    if (transcript.id.empty()) violations.push_back("id empty");
    if (transcript.query_id.empty()) violations.push_back("query_id empty");
    if (transcript.role_id.empty()) violations.push_back("role_id empty");
    if (transcript.strategy == Strategy::Plain) {
        if (transcript.global_outline) violations.push_back("plain transcript has global_outline");
        if (transcript.local_plot) violations.push_back("plain transcript has local_plot");
        if (transcript.iterations_used != 0) violations.push_back("plain transcript has iterations");
    }
    if (!transcript.draft_responses.empty() &&
        transcript.final_response != transcript.draft_responses.back()) {
        violations.push_back("final_response differs from last draft");
    }
    if (!transcript.verified && max_iterations > 0 &&
        transcript.iterations_used != max_iterations) {
        violations.push_back("unverified transcript below iteration cap");
    }
    if (transcript.iterations_used < 0) violations.push_back("iterations_used negative");
    return violations;
}

std::vector<std::string> validate_eval_record(const EvalRecord& record) {
    std::vector<std::string> violations;
    if (record.transcript_id.empty()) violations.push_back("transcript_id empty");
    if (record.sc_score && (*record.sc_score < 1 || *record.sc_score > 5)) {
        violations.push_back("sc_score out of [1,5]");
    }
    auto failed = [&](const char* metric) {
        return std::find(record.parse_failures.begin(), record.parse_failures.end(), metric) !=
               record.parse_failures.end();
    };
    if (record.hallucinated.has_value() == failed("hr")) {
        violations.push_back("hr verdict/parse_failure mismatch");
    }
    if (record.rf_choice.has_value() == failed("rf")) {
        violations.push_back("rf verdict/parse_failure mismatch");
    }
    if (record.qf_choice.has_value() == failed("qf")) {
        violations.push_back("qf verdict/parse_failure mismatch");
    }
    if (record.sc_score.has_value() == failed("sc")) {
        violations.push_back("sc verdict/parse_failure mismatch");
    }
    return violations;
}

ordered_json role_to_json(const RoleCard& card) {
    ordered_json j;
    j["record"] = "role";
    j["id"] = card.id;
    j["canonical_name"] = card.canonical_name;
    j["name_variants"] = card.name_variants;
    j["description"] = card.description;
    j["wiki_text"] = opt_to_json(card.wiki_text);
    j["alias"] = opt_to_json(card.alias);
    j["language"] = card.language;
    return j;
}

RoleCard role_from_json(const ordered_json& j) {
    RoleCard card;
    card.id = j.at("id").get<std::string>();
    card.canonical_name = j.at("canonical_name").get<std::string>();
    card.name_variants = j.at("name_variants").get<std::vector<std::string>>();
    card.description = j.at("description").get<std::string>();
    card.wiki_text = opt_string(j, "wiki_text");
    card.alias = opt_string(j, "alias");
    card.language = j.at("language").get<std::string>();
    return card;
}

ordered_json query_to_json(const AttackQuery& query) {
    ordered_json j;
    j["record"] = "query";
    j["id"] = query.id;
    j["role_id"] = query.role_id;
    j["text"] = query.text;
    j["pattern"] = to_string(query.pattern);
    j["domain_tag"] = opt_to_json(query.domain_tag);
    j["source_role_id"] = opt_to_json(query.source_role_id);
    j["language"] = query.language;
    return j;
}

AttackQuery query_from_json(const ordered_json& j) {
    AttackQuery query;
    query.id = j.at("id").get<std::string>();
    query.role_id = j.at("role_id").get<std::string>();
    query.text = j.at("text").get<std::string>();
    query.pattern = attack_pattern_from_string(j.at("pattern").get<std::string>());
    query.domain_tag = opt_string(j, "domain_tag");
    query.source_role_id = opt_string(j, "source_role_id");
    query.language = j.at("language").get<std::string>();
    return query;
}

ordered_json transcript_to_json(const Transcript& t) {
    ordered_json j;
    j["record"] = "transcript";
    j["id"] = t.id;
    j["query_id"] = t.query_id;
    j["role_id"] = t.role_id;
    j["strategy"] = to_string(t.strategy);
    j["outline_enabled"] = t.outline_enabled;
    j["plot_enabled"] = t.plot_enabled;
    j["verify_enabled"] = t.verify_enabled;
    j["global_outline"] = opt_to_json(t.global_outline);
    j["local_plot"] = opt_to_json(t.local_plot);
    j["draft_responses"] = t.draft_responses;
    j["verify_outputs"] = t.verify_outputs;
    j["final_response"] = t.final_response;
    j["verified"] = t.verified;
    j["iterations_used"] = t.iterations_used;
    j["provider_fingerprint"] = t.provider_fingerprint;
    j["template_overrides"] = t.template_overrides;
    return j;
}

Transcript transcript_from_json(const ordered_json& j) {
    Transcript t;
    t.id = j.at("id").get<std::string>();
    t.query_id = j.at("query_id").get<std::string>();
    t.role_id = j.at("role_id").get<std::string>();
    t.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    t.outline_enabled = j.at("outline_enabled").get<bool>();
    t.plot_enabled = j.at("plot_enabled").get<bool>();
    t.verify_enabled = j.at("verify_enabled").get<bool>();
    t.global_outline = opt_string(j, "global_outline");
    t.local_plot = opt_string(j, "local_plot");
    t.draft_responses = j.at("draft_responses").get<std::vector<std::string>>();
    t.verify_outputs = j.at("verify_outputs").get<std::vector<std::string>>();
    t.final_response = j.at("final_response").get<std::string>();
    t.verified = j.at("verified").get<bool>();
    t.iterations_used = j.at("iterations_used").get<int>();
    t.provider_fingerprint = j.at("provider_fingerprint").get<std::string>();
    t.template_overrides = j.at("template_overrides").get<std::vector<std::string>>();
    return t;
}

ordered_json eval_record_to_json(const EvalRecord& r) {
    ordered_json j;
    j["record"] = "eval";
    j["transcript_id"] = r.transcript_id;
    j["hallucinated"] = r.hallucinated ? ordered_json(*r.hallucinated) : ordered_json(nullptr);
    j["rf_choice"] = opt_to_json(r.rf_choice);
    j["rf_correct"] = r.rf_correct ? ordered_json(*r.rf_correct) : ordered_json(nullptr);
    j["qf_choice"] = opt_to_json(r.qf_choice);
    j["qf_correct"] = r.qf_correct ? ordered_json(*r.qf_correct) : ordered_json(nullptr);
    j["sc_score"] = r.sc_score ? ordered_json(*r.sc_score) : ordered_json(nullptr);
    ordered_json raw = ordered_json::object();
    for (const auto& [metric, text] : r.raw_judge_outputs) raw[metric] = text;
    j["raw_judge_outputs"] = raw;
    j["parse_failures"] = r.parse_failures;
    j["rf_options"] = r.rf_options;
    j["rf_target"] = opt_to_json(r.rf_target);
    j["rf_seed"] = r.rf_seed ? ordered_json(*r.rf_seed) : ordered_json(nullptr);
    j["qf_options"] = r.qf_options;
    j["qf_target"] = opt_to_json(r.qf_target);
    j["qf_seed"] = r.qf_seed ? ordered_json(*r.qf_seed) : ordered_json(nullptr);
    j["qf_fallback"] = r.qf_fallback;
    return j;
}

EvalRecord eval_record_from_json(const ordered_json& j) {
    EvalRecord r;
    r.transcript_id = j.at("transcript_id").get<std::string>();
    if (!j.at("hallucinated").is_null()) r.hallucinated = j.at("hallucinated").get<bool>();
    r.rf_choice = opt_string(j, "rf_choice");
    if (!j.at("rf_correct").is_null()) r.rf_correct = j.at("rf_correct").get<bool>();
    r.qf_choice = opt_string(j, "qf_choice");
    if (!j.at("qf_correct").is_null()) r.qf_correct = j.at("qf_correct").get<bool>();
    if (!j.at("sc_score").is_null()) r.sc_score = j.at("sc_score").get<int>();
    for (const auto& [metric, text] : j.at("raw_judge_outputs").items()) {
        r.raw_judge_outputs[metric] = text.get<std::string>();
    }
    r.parse_failures = j.at("parse_failures").get<std::vector<std::string>>();
    r.rf_options = j.at("rf_options").get<std::vector<std::string>>();
    r.rf_target = opt_string(j, "rf_target");
    if (!j.at("rf_seed").is_null()) r.rf_seed = j.at("rf_seed").get<uint32_t>();
    r.qf_options = j.at("qf_options").get<std::vector<std::string>>();
    r.qf_target = opt_string(j, "qf_target");
    if (!j.at("qf_seed").is_null()) r.qf_seed = j.at("qf_seed").get<uint32_t>();
    r.qf_fallback = j.at("qf_fallback").get<bool>();
    return r;
}

ordered_json make_header(const std::string& kind) {
    ordered_json j;
    j["record"] = "header";
    j["schema"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

std::vector<ordered_json> read_jsonl(const std::filesystem::path& path, const std::string& kind,
                                     bool tolerate_torn_tail) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();

    std::vector<ordered_json> records;
    size_t pos = 0;
    int line_no = 0;
    bool saw_header = false;
    while (pos < content.size()) {
        size_t nl = content.find('\n', pos);
        bool torn = (nl == std::string::npos);
        std::string line = torn ? content.substr(pos) : content.substr(pos, nl - pos);
        pos = torn ? content.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;

        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            if (torn && tolerate_torn_tail && saw_header) break;
            throw DatasetError(path.filename().string() + " line " + std::to_string(line_no) +
                               ": malformed record: " + e.what());
        }
        if (!saw_header) {
            if (!j.is_object() || j.value("record", "") != "header") {
                throw DatasetError(path.filename().string() + " line " + std::to_string(line_no) +
                                   ": missing header record");
            }
            if (j.value("schema", "") != kSchemaVersion) {
                throw DatasetError(path.filename().string() + ": unsupported schema version '" +
                                   j.value("schema", "") + "'");
            }
            if (!kind.empty() && j.value("kind", "") != kind) {
                throw DatasetError(path.filename().string() + ": expected kind '" + kind +
                                   "', found '" + j.value("kind", "") + "'");
            }
            saw_header = true;
            continue;
        }
        records.push_back(std::move(j));
    }
    if (!saw_header) throw DatasetError(path.filename().string() + ": missing header record");
    return records;
}

namespace {

void write_jsonl_file(const std::filesystem::path& path, const std::string& kind,
                      const std::vector<ordered_json>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError("cannot write " + path.string());
    out << make_header(kind).dump() << "\n";
    for (const auto& record : records) out << record.dump() << "\n";
    out.flush();
    if (!out) throw DatasetError("write failed for " + path.string());
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
    Dataset dataset;
    int line_no = 1;  // header consumed line 1
    for (const auto& j : read_jsonl(path, "dataset")) {
        ++line_no;
        const std::string record = j.value("record", "");
        try {
            if (record == "role") {
                dataset.roles.push_back(role_from_json(j));
            } else if (record == "query") {
                dataset.queries.push_back(query_from_json(j));
            } else {
                throw DatasetError("unknown record type '" + record + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError(path.filename().string() + " line " + std::to_string(line_no) +
                               ": " + e.what());
        }
    }

    std::unordered_map<std::string, const RoleCard*> by_id;
    for (const auto& role : dataset.roles) {
        auto violations = validate_role_card(role);
        if (!violations.empty()) {
            throw DatasetError("role " + role.id + " invalid: " + violations.front());
        }
        if (!by_id.emplace(role.id, &role).second) {
            throw DatasetError("duplicate role id " + role.id);
        }
    }

    std::vector<std::string> dangling;
    for (const auto& query : dataset.queries) {
        auto it = by_id.find(query.role_id);
        const RoleCard* owner = it == by_id.end() ? nullptr : it->second;
        if (owner == nullptr) {
            dangling.push_back(query.id);
            continue;
        }
        auto violations = validate_attack_query(query, owner);
        if (!violations.empty()) {
            throw DatasetError("query " + query.id + " invalid: " + violations.front());
        }
        if (query.source_role_id && by_id.find(*query.source_role_id) == by_id.end()) {
            dangling.push_back(query.id);
        }
    }
    if (!dangling.empty()) {
        std::string msg = "referential error: queries with unresolved role ids:";
        for (const auto& id : dangling) msg += " " + id;
        throw DatasetError(msg);
    }
    return dataset;
}

void save_dataset(const std::vector<RoleCard>& roles, const std::vector<AttackQuery>& queries,
                  const std::filesystem::path& path) {
    std::vector<ordered_json> records;
    records.reserve(roles.size() + queries.size());
    for (const auto& role : roles) records.push_back(role_to_json(role));
    for (const auto& query : queries) records.push_back(query_to_json(query));
    write_jsonl_file(path, "dataset", records);
}

std::vector<Transcript> load_transcripts(const std::filesystem::path& path) {
    std::vector<Transcript> out;
    for (const auto& j : read_jsonl(path, "transcripts", /*tolerate_torn_tail=*/true)) {
        if (j.value("record", "") != "transcript") continue;  // skip error records
        out.push_back(transcript_from_json(j));
    }
    return out;
}

void save_transcripts(const std::vector<Transcript>& transcripts,
                      const std::filesystem::path& path) {
    std::vector<ordered_json> records;
    records.reserve(transcripts.size());
    for (const auto& t : transcripts) records.push_back(transcript_to_json(t));
    write_jsonl_file(path, "transcripts", records);
}

std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path) {
    std::vector<EvalRecord> out;
    for (const auto& j : read_jsonl(path, "evals", /*tolerate_torn_tail=*/true)) {
        if (j.value("record", "") != "eval") continue;
        out.push_back(eval_record_from_json(j));
    }
    return out;
}

void save_eval_records(const std::vector<EvalRecord>& records,
                       const std::filesystem::path& path) {
    std::vector<ordered_json> lines;
    lines.reserve(records.size());
    for (const auto& r : records) lines.push_back(eval_record_to_json(r));
    write_jsonl_file(path, "evals", lines);
}

void JsonlWriter::open(const std::filesystem::path& path, const std::string& kind) {
    close();
    path_ = path;
    bool append = false;
    if (std::filesystem::exists(path)) {
        // Keep only the valid prefix: header plus whole, parseable lines.
        std::ifstream in(path, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        std::string content = buffer.str();
        size_t valid_end = 0;
        size_t pos = 0;
        bool saw_header = false;
        while (pos < content.size()) {
            size_t nl = content.find('\n', pos);
            if (nl == std::string::npos) break;  // torn tail, drop it
            std::string line = content.substr(pos, nl - pos);
            bool ok = false;
            try {
                ordered_json j = ordered_json::parse(line);
                if (!saw_header) {
                    ok = j.value("record", "") == "header" &&
                         j.value("schema", "") == kSchemaVersion && j.value("kind", "") == kind;
                    saw_header = ok;
                } else {
                    ok = j.is_object();
                }
            } catch (const nlohmann::json::exception&) {
                ok = false;
            }
            if (!ok) break;
            valid_end = nl + 1;
            pos = nl + 1;
        }
        if (saw_header && valid_end > 0) {
            if (valid_end != content.size()) {
                std::filesystem::resize_file(path, valid_end);
            }
            append = true;
        }
    }
    file_ = std::fopen(path.string().c_str(), append ? "ab" : "wb");
    if (file_ == nullptr) throw DatasetError("cannot open " + path.string() + " for writing");
    if (!append) {
        std::string header = make_header(kind).dump() + "\n";
        std::fwrite(header.data(), 1, header.size(), file_);
        std::fflush(file_);
    }
}

void JsonlWriter::append(const ordered_json& record) {
    if (file_ == nullptr) throw DatasetError("JsonlWriter not open");
    std::string line = record.dump() + "\n";
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size()) {
        throw DatasetError("write failed for " + path_.string());
    }
    std::fflush(file_);
}

void JsonlWriter::close() {
    if (file_ != nullptr) {
        std::fclose(file_);
        file_ = nullptr;
    }
}

}  // namespace rolebreak
