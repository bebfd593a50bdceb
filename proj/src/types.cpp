#include "rolebreak/types.hpp"

namespace rolebreak {

std::string to_string(AttackPattern pattern) {
    switch (pattern) {
        case AttackPattern::Original: return "original";
        case AttackPattern::MultidomainSpec: return "multidomain_spec";
        case AttackPattern::MultilingualRewrite: return "multilingual_rewrite";
        case AttackPattern::OmissionMining: return "omission_mining";
        case AttackPattern::RolePerturbation: return "role_perturbation";
    }
    throw std::logic_error("unknown AttackPattern");
}

AttackPattern attack_pattern_from_string(const std::string& name) {
    if (name == "original") return AttackPattern::Original;
    if (name == "multidomain_spec") return AttackPattern::MultidomainSpec;
    if (name == "multilingual_rewrite") return AttackPattern::MultilingualRewrite;
    if (name == "omission_mining") return AttackPattern::OmissionMining;
    if (name == "role_perturbation") return AttackPattern::RolePerturbation;
    throw std::invalid_argument("unknown attack pattern: " + name);
}

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Plain: return "plain";
        case Strategy::Narrator: return "narrator";
    }
    throw std::logic_error("unknown Strategy");
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "plain") return Strategy::Plain;
    if (name == "narrator") return Strategy::Narrator;
    throw std::invalid_argument("unknown strategy: " + name);
}

const std::array<std::string, 20>& domain_catalog() {
    static const std::array<std::string, 20> domains = {
        "Gourmet Cooking", "Travel",    "Household Chores", "Film",
        "Neighborhood",    "Workplace", "Music",            "Shopping",
        "Games",           "Sports",    "History",          "Philosophy",
        "Sociology",       "Psychology", "Economics",       "Geography",
        "Physics",         "Biology",   "Computer Science", "Medicine",
    };
    return domains;
}

bool domain_in_catalog(const std::string& domain) {
    for (const auto& d : domain_catalog()) {
        if (d == domain) return true;
    }
    return false;
}

std::string Transcript::strategy_label() const {
    if (strategy == Strategy::Plain) return "plain";
    std::string label = "narrator";
    if (!outline_enabled) label += "-noout";
    if (!plot_enabled) label += "-noplot";
    if (!verify_enabled) label += "-noverify";
    return label;
}

}  // namespace rolebreak
