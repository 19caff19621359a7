#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kbqa/dataset_io.hpp"
#include "kbqa/enumerator.hpp"
#include "kbqa/error.hpp"
#include "kbqa/executor.hpp"
#include "kbqa/kb_store.hpp"
#include "kbqa/metrics.hpp"
#include "kbqa/pipeline.hpp"
#include "kbqa/retrievers.hpp"
#include "kbqa/token_scorers.hpp"

namespace {

using namespace kbqa;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitScorer = 3;

struct Options {
  std::string kb;
  std::string aliases;
  std::string labels;
  std::string schema;
  std::string type_relation = "type_rel";
  std::uint64_t seed = 0;
  PipelineConfig pipeline;
  std::string scorer = "lexical";
  std::size_t threads = 1;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

bool is_dump(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line.rfind("@option", 0) == 0;
  return false;
}

TripleStore load_store(const Options& o) {
  if (o.kb.empty()) throw CLI::RequiredError("--kb");
  StoreBuilder builder(StoreOptions{o.type_relation, false});
  auto in = open_input(o.kb);
  if (is_dump(o.kb)) {
    builder.load_dump(in);
  } else {
    bool nt = o.kb.size() > 3 && o.kb.compare(o.kb.size() - 3, 3, ".nt") == 0;
    builder.load_triples(in, nt ? TripleFormat::NTriples : TripleFormat::Tsv3);
  }
  if (!o.schema.empty()) {
    auto s = open_input(o.schema);
    builder.load_schema(s);
  }
  if (!o.labels.empty()) {
    auto s = open_input(o.labels);
    builder.load_labels(s);
  }
  if (!o.aliases.empty()) {
    auto s = open_input(o.aliases);
    builder.load_aliases(s);
  }
  for (const auto& w : builder.warnings()) std::cerr << "warning: " << w << '\n';
  return std::move(builder).freeze();
}

std::vector<QAExample> load_examples(const std::string& path) {
  auto in = open_input(path);
  return read_examples(in);
}

// Retrieval scorer plus a generator per question.
class ScorerChoice {
 public:
  ScorerChoice(const std::string& choice, const TripleStore& store, const Engine& engine) {
    auto colon = choice.find(':');
    std::string kind = choice.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : choice.substr(colon + 1);
    std::size_t v = engine.vocabulary().size();
    if (kind == "uniform" && arg.empty()) {
      retrieval_ = std::make_unique<TableScorer>(0.0);
      shared_ = std::make_unique<UniformScorer>(v);
      return;
    }
    retrieval_ = std::make_unique<LexicalScorer>(LexicalScorer::from_store(store));
    if (kind == "lexical" && arg.empty()) {
      shared_ = std::make_unique<UniformScorer>(v);
    } else if (kind == "ngram" && !arg.empty()) {
      std::vector<std::vector<TokenId>> corpus;
      for (const auto& ex : load_examples(arg))
        if (ex.sexpr) corpus.push_back(encode(engine, *ex.sexpr));
      shared_ = std::make_unique<NgramScorer>(v, corpus, 3);
    } else if (kind == "oracle" && !arg.empty()) {
      for (const auto& ex : load_examples(arg)) {
        if (!ex.sexpr) continue;
        auto scorer = std::make_shared<OracleScorer>(v, encode(engine, *ex.sexpr), 0.0);
        by_id_[ex.question_id] = scorer;
        by_text_[ex.question] = scorer;
      }
      shared_ = std::make_unique<UniformScorer>(v);
    } else if (kind == "extern" && !arg.empty()) {
      shared_ = std::make_unique<ExternalTokenScorer>(arg, v);
    } else {
      throw CLI::ValidationError("--scorer", "expected lexical, uniform, ngram:<path>, oracle:<path> or extern:<cmd>");
    }
  }

  bool per_question() const { return !by_id_.empty(); }

  ScorerSet for_example(const QAExample& ex) const {
    const TokenScorer* generator = shared_.get();
    if (auto it = by_id_.find(ex.question_id); it != by_id_.end()) generator = it->second.get();
    else if (auto jt = by_text_.find(ex.question); jt != by_text_.end()) generator = jt->second.get();
    return ScorerSet{retrieval_.get(), retrieval_.get(), retrieval_.get(), retrieval_.get(), generator};
  }

  const Scorer& retrieval() const { return *retrieval_; }

 private:
  static std::vector<TokenId> encode(const Engine& engine, const std::string& sexpr) {
    auto tokens = engine.vocabulary().encode_form(parse_sexpr(sexpr));
    tokens.push_back(Vocabulary::kEnd);
    return tokens;
  }

  std::unique_ptr<Scorer> retrieval_;
  std::unique_ptr<TokenScorer> shared_;
  std::map<std::string, std::shared_ptr<OracleScorer>> by_id_;
  std::map<std::string, std::shared_ptr<OracleScorer>> by_text_;
};

std::vector<Prediction> run_predictions(const Engine& engine, const ScorerChoice& scorers,
                                        const std::vector<QAExample>& examples, std::size_t threads) {
  if (!scorers.per_question()) return engine.predict_all(examples, scorers.for_example(QAExample{}), threads);
  std::vector<Prediction> out;
  for (const auto& ex : examples) out.push_back(engine.predict(ex, scorers.for_example(ex)));
  return out;
}

Prediction prediction_from_json(const nlohmann::json& j) {
  Prediction p;
  p.question_id = j.at("qid").get<std::string>();
  if (j.contains("sexpr") && j["sexpr"].is_string()) {
    p.sexpr = j["sexpr"].get<std::string>();
    p.form = parse_sexpr(p.sexpr);
  }
  if (j.contains("answers") && j["answers"].is_array())
    p.answers = AnswerSet::entities(j["answers"].get<std::vector<std::string>>());
  return p;
}

std::vector<Prediction> load_predictions(const std::string& path) {
  auto in = open_input(path);
  std::vector<Prediction> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(prediction_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), number, true);
    }
  }
  return out;
}

std::optional<LiteralValue> literal_arg(const std::string& text) {
  auto lit = LiteralValue::try_parse(text);
  if (!lit) throw DataError("not a literal: '" + text + "'");
  return lit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question answering over a triple store with logical forms"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--kb", o.kb, "Triples (TSV, .nt) or a store dump");
  app.add_option("--aliases", o.aliases, "alias<TAB>entity<TAB>popularity file");
  app.add_option("--labels", o.labels, "entity<TAB>label file");
  app.add_option("--schema", o.schema, "Schema declarations file");
  app.add_option("--type-relation", o.type_relation, "Relation whose objects are classes")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for hits@1 sampling")->capture_default_str();
  app.add_option("--beam-size", o.pipeline.beam_size)->capture_default_str();
  app.add_option("--max-output-tokens", o.pipeline.max_output_tokens)->capture_default_str();
  app.add_option("--input-budget", o.pipeline.input_budget)->capture_default_str();
  app.add_option("--top-schema", o.pipeline.top_schema)->capture_default_str();
  app.add_option("--top-elf", o.pipeline.top_elf)->capture_default_str();
  app.add_flag("--constrained,!--unconstrained", o.pipeline.constrained, "Grammar and trie masking (default on)");
  app.add_option("--scorer", o.scorer, "lexical | uniform | ngram:<path> | oracle:<path> | extern:<cmd>")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads for predict")->capture_default_str();

  std::string output;
  auto* ingest = app.add_subcommand("ingest", "Load KB files and write a store dump");
  ingest->add_option("-o,--output", output, "Dump path (stdout if omitted)");

  std::string question;
  std::string input;
  auto* link = app.add_subcommand("link", "Link entity mentions");
  link->add_option("--question", question);
  link->add_option("--input", input, "Dataset JSONL");

  std::vector<std::string> entities, literals;
  int hops = 2;
  bool no_class = false;
  auto* enumerate = app.add_subcommand("enumerate", "List exemplary logical forms from start points");
  enumerate->add_option("--entity", entities);
  enumerate->add_option("--literal", literals);
  enumerate->add_option("--hops", hops)->check(CLI::Range(1, 2))->capture_default_str();
  enumerate->add_flag("--no-class", no_class, "Skip class-constrained variants");

  auto* schema = app.add_subcommand("retrieve-schema", "Top classes and relations for a question");
  schema->add_option("--question", question)->required();

  auto* decode = app.add_subcommand("decode", "Print the decoded beam for a question");
  decode->add_option("--question", question)->required();
  std::string qid = "q";
  decode->add_option("--qid", qid);

  std::string sexpr;
  auto* execute = app.add_subcommand("execute", "Evaluate a logical form");
  execute->add_option("sexpr", sexpr)->required();
  auto* sparql = app.add_subcommand("compile-sparql", "Print the SPARQL query for a logical form");
  sparql->add_option("sexpr", sexpr)->required();

  bool keep_context = false;
  auto* predict = app.add_subcommand("predict", "Answer every question of a dataset");
  predict->add_option("--input", input)->required();
  predict->add_option("-o,--output", output);
  predict->add_flag("--keep-context", keep_context, "Include the generator input in the output");

  std::string predictions;
  bool as_json = false;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("--input", input)->required();
  eval->add_option("--predictions", predictions)->required();
  eval->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) {
      auto report = evaluate_dataset(load_examples(input), load_predictions(predictions), o.seed);
      std::cout << (as_json ? report.to_json().dump(2) + "\n" : report.to_text());
      return kExitOk;
    }
    if (*sparql) {
      std::cout << compile_sparql(parse_sexpr(sexpr), o.type_relation).text << '\n';
      return kExitOk;
    }

    auto store = load_store(o);
    if (*ingest) {
      if (output.empty()) {
        write_dump(store, std::cout);
      } else {
        std::ofstream out(output);
        if (!out) throw DataError("cannot write '" + output + "'");
        write_dump(store, out);
      }
      std::cerr << store.triple_count() << " triples, " << store.entity_ids().size() << " entities, "
                << store.catalog().size() << " schema items\n";
      return kExitOk;
    }
    if (*execute) {
      auto answers = evaluate(parse_sexpr(sexpr), store);
      if (answers.is_number()) std::cout << answers.count() << '\n';
      for (const auto& a : answers.items()) std::cout << a << '\n';
      return kExitOk;
    }
    if (*enumerate) {
      std::vector<StartPoint> starts;
      for (const auto& e : entities) starts.push_back(StartPoint::entity(e));
      for (const auto& l : literals) starts.push_back(StartPoint::literal(*literal_arg(l)));
      if (starts.empty()) throw CLI::RequiredError("--entity or --literal");
      EnumConfig config;
      config.hop_limit = hops;
      config.include_class_constraint = !no_class;
      for (const auto& f : enumerate_elfs(starts, store, config)) {
        auto answers = evaluate(f, store);
        std::cout << print_canonical(f) << '\t' << answers.items().size() << '\n';
      }
      return kExitOk;
    }

    o.pipeline.keep_context = keep_context;
    Engine engine(store, o.pipeline);
    ScorerChoice scorers(o.scorer, store, engine);

    if (*link) {
      std::vector<QAExample> examples;
      if (!input.empty()) examples = load_examples(input);
      if (!question.empty()) examples.push_back({"q", question, std::nullopt, std::nullopt});
      if (examples.empty()) throw CLI::RequiredError("--question or --input");
      for (const auto& ex : examples)
        for (const auto& l : link_entities(Question::from_text(ex.question), store, scorers.retrieval()))
          std::cout << to_json(ex.question_id, l).dump() << '\n';
      return kExitOk;
    }
    if (*schema) {
      auto result = retrieve_schema(Question::from_text(question), store, scorers.retrieval(), o.pipeline.top_schema);
      for (const auto& c : result.classes) std::cout << "class\t" << c.name << '\t' << c.score << '\n';
      for (const auto& r : result.relations) std::cout << "relation\t" << r.name << '\t' << r.score << '\n';
      return kExitOk;
    }
    if (*decode) {
      QAExample ex{qid, question, std::nullopt, std::nullopt};
      auto p = engine.predict(ex, scorers.for_example(ex));
      for (const auto& b : p.beam) std::cout << b << '\n';
      for (const auto& e : p.errors) std::cerr << "error: " << e << '\n';
      return p.scorer_failure ? kExitScorer : kExitOk;
    }
    if (*predict) {
      auto examples = load_examples(input);
      auto results = run_predictions(engine, scorers, examples, o.threads);
      std::ofstream file;
      if (!output.empty()) {
        file.open(output);
        if (!file) throw DataError("cannot write '" + output + "'");
      }
      std::ostream& out = output.empty() ? std::cout : file;
      bool scorer_failed = false;
      for (const auto& p : results) {
        out << to_json(p).dump() << '\n';
        scorer_failed = scorer_failed || p.scorer_failure;
      }
      return scorer_failed ? kExitScorer : kExitOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScorerError& e) {
    std::cerr << "scorer error: " << e.what() << '\n';
    return kExitScorer;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
