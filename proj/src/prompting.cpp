#include "psytab/prompting.hpp"

#include <cstdio>

namespace psytab {

namespace {

std::string format_consistency(double value) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

bool is_default_likert(const std::vector<std::string>& domain) {
    static const std::vector<std::string> kDefault{"0", "1", "2", "3", "4"};
    return domain == kDefault;
}

std::string trimmed(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string default_format_instructions() {
    return "Answer briefly and in character. Then end your reply with one final line of "
           "exactly:\nSCORE: <digit>\nwhere <digit> is your rating for this item.";
}

std::string build_prompt(const ConversationState& state, const std::string& item_id,
                         const std::string& format_instructions) {
    if (state.schema == nullptr)
        throw Error(errc::invalid_argument, "build_prompt: conversation has no schema");
    const DisorderSchema& schema = *state.schema;
    if (state.answered.size() >= schema.item_ids.size())
        throw Error(errc::item_out_of_order, "all items already answered");
    const std::string& expected = schema.item_ids[state.answered.size()];
    if (item_id != expected)
        throw Error(errc::item_out_of_order,
                    "expected item \"" + expected + "\", got \"" + item_id + "\"");

    const Persona& p = state.persona;
    std::string prompt;
    prompt += "You are answering a psychiatric questionnaire about ";
    prompt += schema.disorder_name;
    prompt += ", in character as the person described below. Stay consistent with this "
              "profile in every answer.\n";
    prompt += "- sex: " + p.sex + "\n";
    prompt += "- age: " + p.age + "\n";
    prompt += "- severity prior: " + p.severity_prior + "\n";
    prompt += "- response style: " + p.response_style + "\n";
    prompt += "- symptom awareness: " + p.symptom_awareness + "\n";
    prompt += "- communication style: " + p.communication_style + "\n";
    prompt += "- consistency level: " + format_consistency(p.consistency_level) + "\n";
    prompt += "\n";

    if (!state.knowledge_context.empty()) {
        prompt += "Clinical knowledge context:\n";
        for (const KnowledgeSnippet& snip : state.knowledge_context) {
            prompt += "[" + snip.id + "] " + snip.text + "\n";
        }
        prompt += "\n";
    }

    prompt += "Current item: " + item_id + "\n";
    if (is_default_likert(schema.likert_domain)) {
        prompt += "Rate how often this applies to you on a 0-4 scale, where 0=never and "
                  "4=all of the time.\n";
    } else {
        prompt += "Rate this item with one of: ";
        for (std::size_t i = 0; i < schema.likert_domain.size(); ++i) {
            if (i > 0) prompt += ", ";
            prompt += schema.likert_domain[i];
        }
        prompt += ".\n";
    }
    prompt += "\n";

    prompt += "Your previous answers:\n";
    if (state.answered.empty()) {
        prompt += "(none)\n";
    } else {
        for (const AnswerRecord& rec : state.answered)
            prompt += "- " + rec.item_id + ": " + rec.score + "\n";
    }
    prompt += "\n";

    prompt += format_instructions;
    prompt += "\n";
    return prompt;
}

std::string parse_score(const std::string& response, const std::vector<std::string>& domain) {
    const std::string marker = "SCORE:";
    std::string last_token;
    bool found = false;

    std::size_t pos = 0;
    while (pos <= response.size()) {
        std::size_t eol = response.find('\n', pos);
        std::string line = response.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        std::string stripped = trimmed(line);
        if (stripped.rfind(marker, 0) == 0) {
            last_token = trimmed(stripped.substr(marker.size()));
            found = true;
        }
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }

    if (!found)
        throw Error(errc::no_score_line, "response has no SCORE: line");
    for (const std::string& tok : domain)
        if (tok == last_token) return tok;
    throw Error(errc::out_of_domain_score, "score \"" + last_token + "\" not in Likert domain");
}

}  // namespace psytab
