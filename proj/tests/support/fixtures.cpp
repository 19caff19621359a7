#include "fixtures.hpp"

#include <fstream>
#include <stdexcept>

#include "kbqa/dataset_io.hpp"

#ifndef KBQA_TEST_DATA_DIR
#error "KBQA_TEST_DATA_DIR must be defined"
#endif

namespace kbqa::test {
namespace {

std::ifstream open(std::string_view name) {
  std::ifstream in(data_file(name));
  if (!in) throw std::runtime_error("missing test data file " + std::string(name));
  return in;
}

}  // namespace

std::string data_file(std::string_view name) { return std::string(KBQA_TEST_DATA_DIR) + "/" + std::string(name); }

TripleStore load_store(std::string_view triples, std::string_view labels, std::string_view aliases) {
  StoreBuilder builder;
  auto t = open(triples);
  builder.load_triples(t);
  if (!labels.empty()) {
    auto l = open(labels);
    builder.load_labels(l);
  }
  if (!aliases.empty()) {
    auto a = open(aliases);
    builder.load_aliases(a);
  }
  return std::move(builder).freeze();
}

TripleStore toy_kb() { return load_store("toy_kb.tsv", "toy_labels.tsv", "toy_aliases.tsv"); }

TripleStore desk_kb() { return load_store("desk_kb.tsv", "desk_labels.tsv", "desk_aliases.tsv"); }

std::vector<QAExample> desk_questions() {
  auto in = open("desk_questions.jsonl");
  return read_examples(in);
}

}  // namespace kbqa::test
