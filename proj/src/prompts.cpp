#include "rolebreak/prompts.hpp"

#include <fstream>
#include <sstream>

namespace rolebreak {

namespace {

const char* kMultidomainTpl =
    R"TPL(We are currently testing the performance of a role-playing system. Role-playing refers to the speaker assuming the identity of a specific character, imitating the character's actions, tone, personality, values, background, catchphrases, etc., in response to user queries.

You are an expert in role-playing. Now, please take on the role of the query creator.

First, thoroughly understand the role {role_name} in the current role-playing system. The role's description is {role_description}. The queries you generated must be given as a proper style for this role.

Then, generate a query that the role would find difficult to answer in their role (for example, asking a historical figure like Beethoven about topics in chemistry), as the question falls outside of the character's domain knowledge. Below is the complete list of domains:

domains = [
"Gourmet Cooking",
"Travel",
"Household Chores",
"Film",
"Neighborhood",
"Workplace",
"Music",
"Shopping",
"Games",
"Sports",
"History",
"Philosophy",
"Sociology",
"Psychology",
"Economics",
"Geography",
"Physics",
"Biology",
"Computer Science",
"Medicine"
]

Finally, select 10 different domains, and without providing additional explanations, directly generate 10 queries in the following format:

### Format Example ###

[Economics] Query 1: xxxx

[xxx] Query 2: xxxx

[xxx] Query 3: xxxx

[xxx] Query 4: xxxx

[xxx] Query 5: xxxx

[xxx] Query 6: xxxx

[xxx] Query 7: xxxx

[xxx] Query 8: xxxx

[xxx] Query 9: xxxx

[xxx] Query 10: xxxx

### Format Example ###

Please select 10 domains from domains list, and without any further explanation, generate 10 queries in the format above:)TPL";

const char* kTranslateTpl =
    R"TPL(We are currently testing the performance of a role-playing system. Role-playing refers to the speaker assuming the identity of a specific character, imitating the character's actions, tone, personality, values, background, catchphrases, etc., in response to user queries.

You are an expert in role-playing. Now, please take on the role of the query translator.

Please translate the following query directly into {target_language} without any explanation:
{query})TPL";

const char* kOmissionTpl =
    R"TPL(We are currently testing the performance of a role-playing system. Role-playing refers to the speaker assuming the identity of a specific character, imitating the character's actions, tone, personality, values, background, catchphrases, etc., in response to user queries.

You are an expert in role-playing. Now, please take on the role of the query creator.

First, thoroughly understand the role {role_name} in the current role-playing system. The role's description is {role_description}. The role's wiki page is {role_wiki}. The queries you will generate must be given as a proper style for this role.

Then, you generate a query related to a feature of that role that is easily ignored, that is, the query would not normally be noticed.

Finally, without providing additional explanations, directly generate 5 queries in the following format:

### Format Example ###

Query 1: {example_1}

Query 2: {example_2}

Query 3: {example_3}

Query 4: {example_4}

Query 5: {example_5}

### Format Example ###

Without any further explanation, generate 5 queries in the format above:)TPL";

const char* kRolePlayTpl =
    R"TPL(You are {role_name}, your description is: {role_description}.

Now, please answer some questions to accurately show your personality traits! Your speaking style should fully imitate the personality role assigned to you!

Please do not expose that you are an artificial intelligence model or a language model, you must always remember that you are only assigned one personality role.

Don't be verbose or too formal, or polite when speaking. Please always use English.)TPL";

const char* kJudgeHallucinationTpl =
    R"TPL(You will receive a response written by an AI assistant imitating the character {role_name}. Your task is to rate the performance of {role_name} according to the evaluation steps, using specific criteria.

The data is as follows:

[Character Description]

{role_description}

[Query]

{query}

[Response]

{response}

[Evaluation Criteria]

Did the response result in character hallucination? Character hallucination refers to the situation where the response is inconsistent with the character in terms of facts, personality, values, character, or world background.  For example, if we ask a person from ancient Rome how to write Python, this person should be confused rather than deliberately start coding.

[Evaluation Steps]

1.Read through the interaction content and identify key points related to the character.

2.Read the AI assistant's response and compare it with the character description. Check if the response aligns with the character's description, background, and known facts.

3.Examine whether the response provides detailed facts related to the character or if it is a generic reply that could apply to any character. Detailed responses that align with facts are more accurate and helpful for evaluation.

4.Based on the evaluation criteria, determine if the response resulted in character hallucination. The answer should be [yes] or [no].

First, write your reasoning step by step to ensure your conclusion is correct. Avoid stating the final answer right away. Make sure your analysis includes the reasoning behind your conclusion.

Finally, on a new line, directly repeat the answer without any explanation and embellish: [yes] or [no]:)TPL";

const char* kJudgeRoleFidelityTpl =
    R"TPL(Query:[MASK]

Response:{response}

The possible identities for the role are as follows:

[A] {role_name_a}:{role_description_a},

[B] {role_name_b}: {role_description_b},

[C] {role_name_c}: {role_description_c},

[D] {role_name_d}: {role_description_d},

Please select the role identity that best fits the responder in the current dailogue. Without any explanation and ignoring the influence of language type, please directly output the answer in the format [A] or [B] or [C] or [D]:)TPL";

const char* kJudgeQueryFidelityTpl =
    R"TPL(Query:[MASK]

Response:{response}

The possible options for the query are as follows:

[A] {query_a}.

[B] {query_b}.

[C] {query_c}.

[D] {query_d}.

Please select the query that best fits the responder in the current dailogue. Without any explanation and ignoring the influence of language type, please directly output the answer in the format of [A], [B], [C], or [D]:)TPL";

const char* kJudgeStoryCoherenceTpl =
    R"TPL(You will receive a response written by an AI assistant imitating the character {role_name}. Your task is to rate the performance of {role_name} according to the evaluation steps, using specific criteria.

The data is as follows:

[Character Description]

{role_description}

[Query]

{query}

[Response]

{response}

[Evaluation Criteria]

Story coherence (1-5): Does the response, in combination with the character description, query, and context, form a coherent story? For story coherence, when the query conflicts with the character description, the response should not simply refuse to answer (e.g., "I am not the xxx you mentioned" or "I can't xxxxx"). Instead, it should attempt to address the conflict between the character description and the query, creating a complete narrative.

[Evaluation Steps]

1.Read through the interaction content and identify the story elements present in the response and context.

2.Read the AI assistant's response and compare it with the character description. Check if the response aligns with the character's background, query, and known facts.

3.Examine whether the response provides a complete story. Assess whether the response fits the story logic based on the character setup and the query.

4.Using the evaluation criteria, rate the AI's performance for story coherence on a scale of 1 to 5, with 1 being the lowest and 5 being the highest.

First, write your reasoning step by step to ensure your conclusion is accurate. Avoid stating the score immediately. Make sure your analysis includes the reasoning behind your conclusion.

Finally, on a new line, directly output the score in the fromat of a number is wrapped in brackets, such as [score])TPL";

const char* kGlobalOutlineTpl =
    R"TPL(Now please generate a global outline for your role, which will serve as a guideline for all future interactions. The outline must include:

1. Character Background: (a detailed backstory, including origins, important life events, and any relevant world-building elements).

2. Personality and Traits: (describe personality, quirks, values, and consistent behavior patterns).

3. Interaction Rules: (outline how the character interacts with others and the world, including specific restrictions or freedoms in behavior).

4. Emotional Range: (detail the emotional range of the character, and how they respond to specific situations).

Once the global outline is generated, it must guide all your future interactions to ensure consistency.)TPL";

const char* kLocalPlotTpl =
    R"TPL(Current Query:
{query}

Based on the global outline you generated, now you must create a local plot for the current interaction. Before responding to the user's query, describe:

1. Scenario Setup: (describe the current setting and any relevant environmental factors that influence the character's response).

2. Character Actions and Emotional Responses: (describe the character's immediate actions, facial expressions, and emotional reactions based on the current scenario and user query).

3. Contextual Background: (generate a brief narrative or background story that provides additional context to justify the character's response to the query, especially in complex or controversial topics).

4. When the query is different from your role setting, you want to complete the story of the character as well as possible, rather than being negative. Using storytelling to establish a connection between the role setting and unrelated queries enhances the storytelling aspect significantly. Don't use "I am not the xxx you mentioned" or "I can't xxxxx."

Once the local plot is established, you may proceed with generating your response for the response in a new line, ensuring it is consistent with both the global outline and the local plot:)TPL";

const char* kTargetVerificationTpl =
    R"TPL(Now verify the response you just generated based on the following criteria:

1. Global Outline Adherence Check: (Does the response stay true to the character's background, personality, and interaction rules as defined in the global outline?)

2. Local Plot Consistency Check: (Does the response align with the scenario setup, emotional reactions, and context generated in the local plot?)

3. Fidelity to User Query: (Does the response answer the user's query in a way that maintains the integrity of the character's role and behavior?)

If any deviations are found, adjust the response to better fit both the global outline and the local plot. Ensure consistency before finalizing the response.)TPL";

const char* kRegenerateTpl =
    R"TPL(Your previous response did not pass verification. Following the verification feedback above, regenerate your response so that it stays consistent with both the global outline and the local plot. Reply with the revised response only.)TPL";

}  // namespace

std::string render_template(const std::string& tpl,
                            const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tpl.size());
    size_t pos = 0;
    while (pos < tpl.size()) {
        size_t open = tpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tpl, pos, std::string::npos);
            break;
        }
        out.append(tpl, pos, open - pos);
        size_t close = tpl.find('}', open + 1);
        if (close == std::string::npos) {
            out.append(tpl, open, std::string::npos);
            break;
        }
        std::string token = tpl.substr(open + 1, close - open - 1);
        auto it = values.find(token);
        if (it != values.end()) {
            out += it->second;
        } else {
            out.append(tpl, open, close - open + 1);
        }
        pos = close + 1;
    }
    return out;
}

PromptCatalog::PromptCatalog() {
    templates_ = {
        {kTplMultidomain, kMultidomainTpl},
        {kTplTranslate, kTranslateTpl},
        {kTplOmission, kOmissionTpl},
        {kTplRolePlay, kRolePlayTpl},
        {kTplJudgeHallucination, kJudgeHallucinationTpl},
        {kTplJudgeRoleFidelity, kJudgeRoleFidelityTpl},
        {kTplJudgeQueryFidelity, kJudgeQueryFidelityTpl},
        {kTplJudgeStoryCoherence, kJudgeStoryCoherenceTpl},
        {kTplGlobalOutline, kGlobalOutlineTpl},
        {kTplLocalPlot, kLocalPlotTpl},
        {kTplTargetVerification, kTargetVerificationTpl},
        {kTplRegenerate, kRegenerateTpl},
    };
}

const std::vector<std::string>& PromptCatalog::keys() {
    static const std::vector<std::string> keys = {
        kTplMultidomain,         kTplTranslate,        kTplOmission,
        kTplRolePlay,            kTplJudgeHallucination, kTplJudgeRoleFidelity,
        kTplJudgeQueryFidelity,  kTplJudgeStoryCoherence, kTplGlobalOutline,
        kTplLocalPlot,           kTplTargetVerification, kTplRegenerate,
    };
    return keys;
}

void PromptCatalog::load_overrides(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw PromptError("prompt override directory not found: " + dir.string());
    }
    for (const auto& key : keys()) {
        auto file = dir / (key + ".txt");
        if (!std::filesystem::exists(file)) continue;
        std::ifstream in(file, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        std::string text = buffer.str();
        // A trailing newline from a text editor is not part of the template.
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        if (text != templates_.at(key)) {
            templates_[key] = std::move(text);
            overridden_.push_back(key);
        }
    }
}

const std::string& PromptCatalog::text(const std::string& key) const {
    auto it = templates_.find(key);
    if (it == templates_.end()) throw PromptError("unknown prompt template: " + key);
    return it->second;
}

std::string PromptCatalog::render(const std::string& key,
                                  const std::map<std::string, std::string>& values) const {
    return render_template(text(key), values);
}

void PromptCatalog::dump(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& key : keys()) {
        std::ofstream out(dir / (key + ".txt"), std::ios::binary | std::ios::trunc);
        if (!out) throw PromptError("cannot write template file in " + dir.string());
        out << templates_.at(key) << "\n";
    }
}

}  // namespace rolebreak
