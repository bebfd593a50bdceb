#pragma once
// Prompt template catalog.
//
// Templates are keyed by table name (table5..table15). The compiled-in
// defaults are the canonical texts; operators may override any of them with
// plain text files named <key>.txt in a directory of their choice. Overrides
// are tracked so transcripts can record their provenance.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rolebreak {

struct PromptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Table name keys.
inline constexpr const char* kTplMultidomain = "table5";
inline constexpr const char* kTplTranslate = "table6";
inline constexpr const char* kTplOmission = "table7";
inline constexpr const char* kTplRolePlay = "table8";
inline constexpr const char* kTplJudgeHallucination = "table9";
inline constexpr const char* kTplJudgeRoleFidelity = "table10";
inline constexpr const char* kTplJudgeQueryFidelity = "table11";
inline constexpr const char* kTplJudgeStoryCoherence = "table12";
inline constexpr const char* kTplGlobalOutline = "table13";
inline constexpr const char* kTplLocalPlot = "table14";
inline constexpr const char* kTplTargetVerification = "table15";
// Not a paper table: the loop's re-prompt after a failed verification.
inline constexpr const char* kTplRegenerate = "regenerate";

// Substitutes {name} tokens that have an entry in `values`; any other braced
// token is left untouched (templates contain literal examples such as
// {example_1}, and anonymized texts contain alias tokens such as {3ff}).
// Substituted values are never re-scanned.
std::string render_template(const std::string& tpl,
                            const std::map<std::string, std::string>& values);

class PromptCatalog {
  public:
    PromptCatalog();

    // Replaces defaults with <key>.txt files found in `dir`. Unknown files
    // are ignored; the overridden keys are recorded.
    void load_overrides(const std::filesystem::path& dir);

    const std::string& text(const std::string& key) const;
    std::string render(const std::string& key,
                       const std::map<std::string, std::string>& values) const;

    const std::vector<std::string>& overridden_keys() const { return overridden_; }
    static const std::vector<std::string>& keys();

    // Writes every template to <dir>/<key>.txt (seed material for overrides).
    void dump(const std::filesystem::path& dir) const;

  private:
    std::map<std::string, std::string> templates_;
    std::vector<std::string> overridden_;
};

}  // namespace rolebreak
