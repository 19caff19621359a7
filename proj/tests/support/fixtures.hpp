#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/pipeline.hpp"

namespace kbqa::test {

std::string data_file(std::string_view name);

/// Loads triples plus optional labels/aliases files from tests/data.
TripleStore load_store(std::string_view triples, std::string_view labels = {}, std::string_view aliases = {});

/// Seven-triple toy KB: sys1, e1, eng1, eng2, ox1.
TripleStore toy_kb();

/// Units, rocket engines and resistivity units; backs the known-error fixtures.
TripleStore desk_kb();
std::vector<QAExample> desk_questions();

}  // namespace kbqa::test
