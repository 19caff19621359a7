#include "kbqa/dataset_io.hpp"

#include <istream>
#include <ostream>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa {

std::vector<QAExample> read_examples(std::istream& in) {
  std::vector<QAExample> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      QAExample ex;
      ex.question_id = j.at("qid").get<std::string>();
      ex.question = j.at("question").get<std::string>();
      if (j.contains("sexpr") && !j["sexpr"].is_null()) ex.sexpr = j["sexpr"].get<std::string>();
      if (j.contains("answers") && !j["answers"].is_null()) ex.answers = j["answers"].get<std::vector<std::string>>();
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad example record: ") + e.what(), number, true);
    }
  }
  return out;
}

nlohmann::json to_json(const QAExample& example) {
  nlohmann::json j{{"qid", example.question_id}, {"question", example.question}};
  if (example.sexpr) j["sexpr"] = *example.sexpr;
  if (example.answers) j["answers"] = *example.answers;
  return j;
}

void write_examples(const std::vector<QAExample>& examples, std::ostream& out) {
  for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
}

nlohmann::json to_json(const Prediction& p) {
  nlohmann::json j;
  j["qid"] = p.question_id;
  j["sexpr"] = p.form ? nlohmann::json(p.sexpr) : nlohmann::json(nullptr);
  if (p.answers) {
    if (p.answers->is_number()) j["answers"] = {std::to_string(p.answers->count())};
    else j["answers"] = p.answers->items();
  } else {
    j["answers"] = nullptr;
  }
  j["provenance"] = std::string(to_string(p.provenance));
  j["beam_rank"] = p.beam_rank ? nlohmann::json(*p.beam_rank) : nlohmann::json(nullptr);
  j["elf_rank"] = p.elf_rank ? nlohmann::json(*p.elf_rank) : nlohmann::json(nullptr);
  j["linked_entities"] = p.linked_entities;
  j["beam"] = p.beam;
  j["errors"] = p.errors;
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& t : p.timings) timing[t.stage] = t.milliseconds;
  timing["total"] = p.total_milliseconds;
  j["timing_ms"] = timing;
  if (p.context) {
    j["context"] = {{"text", p.context->text()}, {"tokens", p.context->tokens.size()}};
  }
  return j;
}

nlohmann::json to_json(const std::string& question_id, const LinkedEntity& link) {
  return {{"question_id", question_id},
          {"mention", {{"start", link.mention.start}, {"end", link.mention.end}, {"surface", link.mention.surface}}},
          {"entity", link.entity},
          {"score", link.score}};
}

}  // namespace kbqa
