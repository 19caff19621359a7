#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/pipeline.hpp"

namespace kbqa {

/// One JSON object per line: {"qid", "question", "sexpr"?, "answers"?}.
/// Blank lines are skipped. Throws ParseError with the line number.
std::vector<QAExample> read_examples(std::istream& in);
void write_examples(const std::vector<QAExample>& examples, std::ostream& out);

nlohmann::json to_json(const QAExample& example);
nlohmann::json to_json(const Prediction& prediction);
nlohmann::json to_json(const std::string& question_id, const LinkedEntity& link);

}  // namespace kbqa
