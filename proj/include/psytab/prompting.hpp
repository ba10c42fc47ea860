#pragma once

#include <string>
#include <vector>

#include "psytab/errors.hpp"
#include "psytab/knowledge.hpp"
#include "psytab/persona.hpp"
#include "psytab/schema.hpp"

namespace psytab {

struct AnswerRecord {
    std::string item_id;
    std::string score;
    std::string free_text;
};

/// Conversation so far for one synthetic patient. `answered` item ids are a
/// prefix of the schema item order.
struct ConversationState {
    Persona persona;
    const DisorderSchema* schema = nullptr;
    std::vector<AnswerRecord> answered;
    std::vector<KnowledgeSnippet> knowledge_context;
};

std::string default_format_instructions();

/// Assembles the per-item prompt: persona block, knowledge context (omitted
/// entirely when none was retrieved), the current item with its Likert
/// legend, memory of prior answers, formatting instructions. `item_id` must
/// be the next unanswered item in schema order (errc::item_out_of_order).
std::string build_prompt(const ConversationState& state, const std::string& item_id,
                         const std::string& format_instructions = default_format_instructions());

/// Extracts the score from a raw model reply: the last line starting with
/// "SCORE:" wins; its token must be in the Likert domain.
/// Throws errc::no_score_line / errc::out_of_domain_score.
std::string parse_score(const std::string& response, const std::vector<std::string>& domain);

}  // namespace psytab
