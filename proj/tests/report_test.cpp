#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "epd/instance_gen.hpp"
#include "epd/report.hpp"
#include "epd/sensitivity.hpp"

using namespace epd;

namespace {

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string cur;
  while (std::getline(in, cur))
    if (cur == line) return true;
  return false;
}

std::vector<InstanceResult> tiny_batch() {
  ExperimentConfig cfg;
  cfg.family = Family::RandomNonUltrametric;
  cfg.instances = 3;
  return run_batch(cfg, 5);
}

}  // namespace

TEST_CASE("the CSV header matches the row layout") {
  auto results = tiny_batch();
  std::string csv = format_results_csv(results);
  std::istringstream in(csv);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  CHECK(header == results_csv_header());
  size_t header_fields = static_cast<size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  CHECK(header_fields == 46);
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    CHECK(static_cast<size_t>(std::count(row.begin(), row.end(), ',')) + 1 == header_fields);
  }
  CHECK(rows == 3);
}

TEST_CASE("identical stats render identical bytes") {
  auto results = tiny_batch();
  BatchStats st = summarize(results);
  ExperimentConfig cfg;
  cfg.family = Family::RandomNonUltrametric;
  cfg.instances = 3;
  CHECK(format_summary(st, cfg, 5) == format_summary(st, cfg, 5));
  CHECK(format_results_csv(results) == format_results_csv(results));
}

TEST_CASE("summary carries the pooled statistics as two-decimal percentages") {
  BatchStats st;
  st.instances = 1;
  st.gap_count = 2;
  st.mean_gap = 0.000813;  // 0.08 percent
  st.std_gap = 0.0014;
  st.max_gap = 0.0377;
  st.max_dissimilarity = 0.625;
  st.dissim_at_max_gap = 0.625;
  st.argmax.n_species = 10;
  ExperimentConfig cfg;
  cfg.family = Family::RandomUltrametric;
  std::string s = format_summary(st, cfg, 42);
  CHECK(has_line(s, "experiment_family = random-ultrametric"));
  CHECK(has_line(s, "master_seed = 42"));
  CHECK(has_line(s, "mean_gap_pct = 0.08"));
  CHECK(has_line(s, "std_gap_pct = 0.14"));
  CHECK(has_line(s, "max_gap_pct = 3.77"));
  CHECK(has_line(s, "max_dissimilarity = 0.62"));
  CHECK(has_line(s, "probability_mode = per-category"));
  CHECK(has_line(s,
      "category_intervals = [0.50,1.00] [0.20,0.50] [0.10,0.20] [0.05,0.10] [0.00,0.05]"));
}

TEST_CASE("an all-zero batch renders zero percentages") {
  InstanceResult r;
  r.n_species = 4;
  std::vector<InstanceResult> rs = {r};
  BatchStats st = summarize(rs);
  ExperimentConfig cfg;
  std::string s = format_summary(st, cfg, 1);
  CHECK(has_line(s, "mean_gap_pct = 0.00"));
  CHECK(has_line(s, "std_gap_pct = 0.00"));
  CHECK(has_line(s, "max_gap_pct = 0.00"));
}

TEST_CASE("perturbation summaries name the fraction instead of intervals") {
  InstanceResult r;
  r.n_species = 4;
  std::vector<InstanceResult> rs = {r};
  BatchStats st = summarize(rs);
  ExperimentConfig cfg;
  cfg.family = Family::FixedTreePerturbation;
  cfg.perturb_fraction = 0.25;
  std::string s = format_summary(st, cfg, 1);
  CHECK(has_line(s, "perturb_fraction = 0.25"));
  CHECK(s.find("category_intervals") == std::string::npos);
  CHECK(s.find("category_mode") == std::string::npos);
}

TEST_CASE("the gen manifest is valid JSON with stable keys") {
  GenParams params;
  params.internal_lo = 5;
  params.internal_hi = 15;
  Instance inst = gen_instance(3, 1, params);
  std::string m = format_gen_manifest(inst);
  nlohmann::json j = nlohmann::json::parse(m);
  CHECK(j["master_seed"] == 3);
  CHECK(j["instance_index"] == 1);
  CHECK(j["n_species"] == inst.tree.n_species());
  CHECK(j["k"] == inst.k);
  CHECK(j["rho"] == inst.prov.rho);
  CHECK(j["per_species_probs"] == false);
  CHECK(j["scenario1_category_probs"].size() == 5);
  CHECK(format_gen_manifest(inst) == m);
}

TEST_CASE("write_text_file creates parent directories") {
  const std::string dir = "report_tmp_dir";
  const std::string path = dir + "/nested/out.txt";
  write_text_file(path, "payload\n");
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "payload");
  in.close();
  std::remove(path.c_str());
  std::filesystem::remove_all(dir);
}
