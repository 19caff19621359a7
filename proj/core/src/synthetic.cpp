#include "kbqa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "kbqa/executor.hpp"
#include "kbqa/text.hpp"

namespace kbqa {
namespace {

constexpr const char* kWords[] = {
    "river",   "city",    "engine",  "album",   "player",  "team",    "planet",  "mountain", "language", "school",
    "company", "film",    "book",    "author",  "country", "island",  "bridge",  "station",  "museum",   "song",
    "disease", "drug",    "gene",    "protein", "vehicle", "ship",    "airport", "railway",  "galaxy",   "element",
    "mineral", "tree",    "bird",    "fish",    "insect",  "festival", "award",  "league",   "stadium",  "recipe",
    "opera",   "painter", "poem",    "theorem", "unit",    "currency", "bank",   "market",   "product",  "device"};
constexpr const char* kVerbs[] = {"located", "founded", "written", "owned",  "played", "measured",
                                  "named",   "built",   "born",    "played", "made",   "held"};
constexpr const char* kNouns[] = {"origin", "creator", "member", "part", "source", "partner", "leader", "host"};

}  // namespace

SyntheticKb make_synthetic_kb(const SyntheticConfig& config) {
  std::mt19937_64 rng(config.seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  constexpr std::size_t word_count = std::size(kWords);

  std::vector<std::string> classes;
  for (std::size_t c = 0; c < config.classes; ++c)
    classes.push_back("synth." + std::string(kWords[c % word_count]) + (c >= word_count ? std::to_string(c) : ""));

  struct Rel {
    std::string name;
    std::size_t domain;
    std::size_t range;
    bool numeric;
  };
  std::vector<Rel> relations;
  std::vector<std::vector<std::size_t>> by_domain(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t k = 0; k < config.relations_per_class; ++k) {
      auto name = classes[c] + "." + kNouns[(c + k) % std::size(kNouns)] + "_" + kVerbs[(c * 3 + k) % std::size(kVerbs)];
      while (std::any_of(relations.begin(), relations.end(), [&](const Rel& r) { return r.name == name; }))
        name += "_x";
      by_domain[c].push_back(relations.size());
      relations.push_back({name, c, pick(classes.size()), false});
    }
    by_domain[c].push_back(relations.size());
    relations.push_back({classes[c] + ".size", c, 0, true});
  }

  StoreBuilder builder;
  for (std::size_t c = 0; c < classes.size(); ++c) builder.add_schema({SchemaKind::Class, classes[c], {}, {}, {}});
  for (const auto& r : relations)
    builder.add_schema({SchemaKind::Relation, r.name, {}, classes[r.domain],
                        r.numeric ? std::optional<std::string>() : classes[r.range]});

  std::vector<std::string> ids(config.entities);
  std::vector<std::size_t> class_of(config.entities);
  std::vector<std::vector<std::size_t>> members(classes.size());
  for (std::size_t e = 0; e < config.entities; ++e) {
    ids[e] = "m.0syn" + std::to_string(e);
    class_of[e] = e % classes.size();
    members[class_of[e]].push_back(e);
    auto label = std::string(kWords[pick(word_count)]) + " " + kWords[pick(word_count)] + " " + kWords[pick(word_count)];
    builder.add_label(ids[e], label);
    builder.add_alias(label, ids[e], 1.0 / static_cast<double>(1 + e % 17));
    builder.add_triple(ids[e], "type_rel", EntityId(classes[class_of[e]]));
  }

  std::uniform_real_distribution<double> size_dist(1.0, 1000.0);
  for (std::size_t e = 0; e < config.entities; ++e) {
    const auto& rels = by_domain[class_of[e]];
    for (std::size_t f = 0; f < config.facts_per_entity; ++f) {
      const auto& r = relations[rels[pick(rels.size())]];
      if (r.numeric) {
        builder.add_triple(ids[e], r.name, LiteralValue::from_double(std::round(size_dist(rng) * 10.0) / 10.0, "float"));
      } else if (!members[r.range].empty()) {
        builder.add_triple(ids[e], r.name, EntityId(ids[members[r.range][pick(members[r.range].size())]]));
      }
    }
  }

  SyntheticKb kb{std::move(builder).freeze(), {}};
  const auto& store = kb.store;
  for (std::size_t q = 0; q < config.questions * 10 && kb.questions.size() < config.questions; ++q) {
    auto e = pick(config.entities);
    auto node = store.find_entity(ids[e]);
    if (!node) continue;
    std::vector<Edge> incoming;
    for (const auto& edge : store.in_edges(*node))
      if (store.relation_name(edge.relation) != store.type_relation()) incoming.push_back(edge);
    if (incoming.empty()) continue;
    const auto& rel = store.relation_name(incoming[pick(incoming.size())].relation);
    auto form = LogicalForm::join(rel, LogicalForm::entity(ids[e]));
    std::string relation_words = join(tokenize_text(rel.substr(rel.find('.') + 1)), " ");
    QAExample ex;
    ex.question_id = "syn-" + std::to_string(kb.questions.size());
    ex.question = "which " + relation_words + " " + store.label_of(ids[e]);
    if (q % 3 == 0) {
      auto cls = rel.substr(0, rel.rfind('.'));
      form = LogicalForm::conj(LogicalForm::class_ref(cls), form);
      ex.question = "which " + join(tokenize_text(cls.substr(cls.find('.') + 1)), " ") + " has " + relation_words +
                    " " + store.label_of(ids[e]);
    }
    ex.sexpr = print_canonical(form);
    auto answers = evaluate(form, store);
    ex.answers = answers.items();
    kb.questions.push_back(std::move(ex));
  }
  return kb;
}

}  // namespace kbqa
