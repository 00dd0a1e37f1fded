#include "epd/species_table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace epd {

namespace {

[[noreturn]] void fail_at(size_t line_no, const std::string& msg) {
  throw std::invalid_argument("species table, line " + std::to_string(line_no) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_prob(std::string_view field, size_t line_no, const char* column) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    fail_at(line_no, std::string("malformed ") + column + " value '" + std::string(field) + "'");
  if (!(v >= 0.0 && v <= 1.0))
    fail_at(line_no, std::string(column) + " = " + std::string(field) + " is outside [0,1]");
  return v;
}

}  // namespace

SpeciesTable parse_species_table(std::string_view text) {
  SpeciesTable table;
  std::unordered_set<std::string_view> seen;
  bool header_seen = false;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t nl = text.find('\n', start);
    const std::string_view raw =
        text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const std::vector<std::string_view> fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() == 2 && fields[0] == "species" && fields[1] == "category") {
        table.has_probs = false;
      } else if (fields.size() == 3 && fields[0] == "species" && fields[1] == "p1" &&
                 fields[2] == "p2") {
        table.has_probs = true;
      } else {
        fail_at(line_no, "header must be 'species,category' or 'species,p1,p2'");
      }
      header_seen = true;
      continue;
    }

    const size_t expected = table.has_probs ? 3 : 2;
    if (fields.size() != expected)
      fail_at(line_no, "expected " + std::to_string(expected) + " fields, found " +
                           std::to_string(fields.size()));
    if (fields[0].empty()) fail_at(line_no, "empty species label");
    if (!seen.insert(fields[0]).second)
      fail_at(line_no, "duplicate species label '" + std::string(fields[0]) + "'");
    table.labels.emplace_back(fields[0]);
    if (table.has_probs) {
      table.p1.push_back(parse_prob(fields[1], line_no, "p1"));
      table.p2.push_back(parse_prob(fields[2], line_no, "p2"));
    } else {
      int32_t cat = 0;
      const auto res =
          std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), cat);
      if (res.ec != std::errc{} || res.ptr != fields[1].data() + fields[1].size())
        fail_at(line_no, "malformed category '" + std::string(fields[1]) + "'");
      if (cat < 1 || cat > 5)
        fail_at(line_no, "category " + std::to_string(cat) + " is outside 1..5");
      table.categories.push_back(cat);
    }
  }
  if (!header_seen) throw std::invalid_argument("species table: no header row found");
  if (table.labels.empty()) throw std::invalid_argument("species table: no data rows");
  return table;
}

SpeciesTable read_species_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error while reading '" + path + "'");
  return parse_species_table(buf.str());
}

namespace {

// table row index per species index, after verifying the label bijection.
std::vector<size_t> match_rows(const SpeciesTable& table, const Phylogeny& tree) {
  std::unordered_map<std::string_view, size_t> row_of;
  row_of.reserve(table.labels.size());
  for (size_t r = 0; r < table.labels.size(); ++r) row_of.emplace(table.labels[r], r);

  std::vector<size_t> rows(static_cast<size_t>(tree.n_species()));
  for (int32_t s = 0; s < tree.n_species(); ++s) {
    const auto it = row_of.find(tree.label(s));
    if (it == row_of.end())
      throw std::invalid_argument("species '" + tree.label(s) +
                                  "' is in the tree but not in the table");
    rows[static_cast<size_t>(s)] = it->second;
    row_of.erase(it);
  }
  if (!row_of.empty())
    throw std::invalid_argument("species '" + std::string(row_of.begin()->first) +
                                "' is in the table but not in the tree");
  return rows;
}

}  // namespace

std::vector<int32_t> categories_for_tree(const SpeciesTable& table, const Phylogeny& tree) {
  if (table.has_probs)
    throw std::invalid_argument(
        "this operation needs a category table (header 'species,category')");
  const std::vector<size_t> rows = match_rows(table, tree);
  std::vector<int32_t> cats(rows.size());
  for (size_t s = 0; s < rows.size(); ++s) cats[s] = table.categories[rows[s]];
  return cats;
}

std::array<std::vector<double>, 2> probs_for_tree(const SpeciesTable& table,
                                                  const Phylogeny& tree) {
  if (!table.has_probs)
    throw std::invalid_argument(
        "this operation needs a probability table (header 'species,p1,p2')");
  const std::vector<size_t> rows = match_rows(table, tree);
  std::array<std::vector<double>, 2> probs;
  probs[0].resize(rows.size());
  probs[1].resize(rows.size());
  for (size_t s = 0; s < rows.size(); ++s) {
    probs[0][s] = table.p1[rows[s]];
    probs[1][s] = table.p2[rows[s]];
  }
  return probs;
}

}  // namespace epd
