#pragma once
// Comma-separated species tables. Two variants, declared by the header row:
//   species,category   one IUCN-style category 1..5 per species
//   species,p1,p2      extinction probabilities for scenarios 1 and 2
// Lines starting with '#' and blank lines are skipped. Labels are taken
// verbatim (no quoting), so they cannot contain commas.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "epd/phylogeny.hpp"

namespace epd {

struct SpeciesTable {
  bool has_probs = false;  // true: p1/p2 filled; false: categories filled
  std::vector<std::string> labels;  // file order, duplicate-free
  std::vector<int32_t> categories;
  std::vector<double> p1, p2;
};

// Throws std::invalid_argument (with the line number) on: unknown header,
// wrong field count, duplicate or empty label, category outside 1..5,
// probability outside [0,1], malformed number.
SpeciesTable parse_species_table(std::string_view text);

// Reads and parses a table file. Throws std::runtime_error when the file
// cannot be read.
SpeciesTable read_species_table(const std::string& path);

// Cross-checks that the table's labels and the tree's leaf labels are the
// same set, naming the first offending label otherwise, and returns the
// table's values reordered to species-index order.
std::vector<int32_t> categories_for_tree(const SpeciesTable& table, const Phylogeny& tree);
std::array<std::vector<double>, 2> probs_for_tree(const SpeciesTable& table,
                                                  const Phylogeny& tree);

}  // namespace epd
