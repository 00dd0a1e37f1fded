#include "epd/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace epd {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string pct2(double fraction) { return fmt("%.2f", fraction * 100.0); }
std::string fix2(double v) { return fmt("%.2f", v); }
std::string full(double v) { return fmt("%.17g", v); }

const char* family_name(Family f) {
  switch (f) {
    case Family::RandomNonUltrametric: return "random-nonultrametric";
    case Family::RandomUltrametric: return "random-ultrametric";
    case Family::FixedTreeScenarios: return "fixed-tree-scenarios";
    case Family::FixedTreePerturbation: return "fixed-tree-perturbation";
  }
  return "unknown";
}

const char* prob_mode_name(ProbMode m) {
  return m == ProbMode::PerSpecies ? "per-species" : "per-category";
}

const char* category_mode_name(CategoryMode m) {
  switch (m) {
    case CategoryMode::Uniform: return "uniform";
    case CategoryMode::Skewed: return "skewed";
    case CategoryMode::Mixed: return "mixed";
  }
  return "unknown";
}

std::string join_counts(const std::array<int32_t, 5>& counts) {
  std::string out;
  for (size_t g = 0; g < 5; ++g) {
    if (g) out += ' ';
    out += std::to_string(counts[g]);
  }
  return out;
}

std::string join_probs2(const std::array<double, 5>& probs) {
  std::string out;
  for (size_t g = 0; g < 5; ++g) {
    if (g) out += ' ';
    out += fix2(probs[g]);
  }
  return out;
}

}  // namespace

std::string format_summary(const BatchStats& stats, const ExperimentConfig& cfg,
                           uint64_t master_seed) {
  std::string o;
  o += "experiment_family = ";
  o += family_name(cfg.family);
  o += '\n';
  o += "instances = " + std::to_string(stats.instances) + '\n';
  o += "master_seed = " + std::to_string(master_seed) + '\n';
  o += "probability_mode = ";
  o += prob_mode_name(cfg.prob_mode);
  o += '\n';
  const bool random_family = cfg.family == Family::RandomNonUltrametric ||
                             cfg.family == Family::RandomUltrametric;
  if (random_family) {
    o += "category_mode = ";
    o += category_mode_name(cfg.category_mode);
    o += '\n';
  }
  if (cfg.family != Family::FixedTreePerturbation) {
    o += "category_intervals =";
    for (const Interval& iv : cfg.intervals)
      o += " [" + fix2(iv.lo) + "," + fix2(iv.hi) + "]";
    o += '\n';
  } else {
    o += "perturb_fraction = " + full(cfg.perturb_fraction) + '\n';
  }
  if (cfg.fixed_rho) o += "fixed_rho = " + full(*cfg.fixed_rho) + '\n';
  o += "species_min = " + std::to_string(stats.min_species) + '\n';
  o += "species_max = " + std::to_string(stats.max_species) + '\n';
  o += "pooled_gaps = " + std::to_string(stats.gap_count) + '\n';
  o += "mean_gap_pct = " + pct2(stats.mean_gap) + '\n';
  o += "std_gap_pct = " + pct2(stats.std_gap) + '\n';
  o += "max_gap_pct = " + pct2(stats.max_gap) + '\n';
  o += "max_dissimilarity = " + fix2(stats.max_dissimilarity) + '\n';
  o += "dissim_at_max_gap = " + fix2(stats.dissim_at_max_gap) + '\n';
  o += "empty_set_pairs = " + std::to_string(stats.empty_set_pairs) + '\n';
  o += '\n';

  const InstanceResult& a = stats.argmax;
  o += "[argmax_instance]\n";
  o += "instance_index = " + std::to_string(a.index) + '\n';
  o += "n_species = " + std::to_string(a.n_species) + '\n';
  if (random_family) {
    o += "n_internal = " + std::to_string(a.prov.n_internal) + '\n';
    o += "d_max = " + std::to_string(a.prov.d_max) + '\n';
    o += "lambda_max = " + std::to_string(a.prov.lambda_max) + '\n';
    o += "skewed_categories = " + std::to_string(a.prov.skewed_categories ? 1 : 0) + '\n';
  }
  o += "rho = " + fmt("%g", a.prov.rho) + '\n';
  o += "k = " + std::to_string(a.k) + '\n';
  o += "total_pd_1 = " + fix2(a.total_pd1) + '\n';
  o += "total_pd_2 = " + fix2(a.total_pd2) + '\n';
  o += "base_epd_1 = " + fix2(a.base_epd1) + '\n';
  o += "base_epd_2 = " + fix2(a.base_epd2) + '\n';
  o += "epd_1_s1 = " + fix2(a.epd11) + '\n';
  o += "epd_1_s2 = " + fix2(a.epd12) + '\n';
  o += "epd_2_s1 = " + fix2(a.epd21) + '\n';
  o += "epd_2_s2 = " + fix2(a.epd22) + '\n';
  o += "gap1_pct = " + pct2(a.gap1) + '\n';
  o += "gap2_pct = " + pct2(a.gap2) + '\n';
  o += "dissimilarity = " + fix2(a.dissimilarity) + '\n';
  if (cfg.family != Family::FixedTreePerturbation) {
    o += "species_by_category = " + join_counts(a.species_by_cat) + '\n';
    o += "protected_by_category_s1 = " + join_counts(a.protected_by_cat1) + '\n';
    o += "protected_by_category_s2 = " + join_counts(a.protected_by_cat2) + '\n';
    if (!a.per_species) {
      o += "scenario1_category_probs = " + join_probs2(a.category_probs[0]) + '\n';
      o += "scenario2_category_probs = " + join_probs2(a.category_probs[1]) + '\n';
    }
  }
  return o;
}

std::string results_csv_header() {
  std::string h =
      "index,n_species,k,rho,n_internal,d_max,lambda_max,skewed_categories,"
      "per_species,total_pd1,total_pd2,base_epd1,base_epd2,epd11,epd12,epd21,epd22,"
      "gap1,gap2,dissimilarity,intersection_size";
  for (int g = 1; g <= 5; ++g) h += ",species_cat" + std::to_string(g);
  for (int g = 1; g <= 5; ++g) h += ",s1_cat" + std::to_string(g);
  for (int g = 1; g <= 5; ++g) h += ",s2_cat" + std::to_string(g);
  for (int g = 1; g <= 5; ++g) h += ",p1_cat" + std::to_string(g);
  for (int g = 1; g <= 5; ++g) h += ",p2_cat" + std::to_string(g);
  return h;
}

std::string format_results_csv(std::span<const InstanceResult> results) {
  std::string o = results_csv_header();
  o += '\n';
  for (const InstanceResult& r : results) {
    o += std::to_string(r.index);
    o += ',' + std::to_string(r.n_species);
    o += ',' + std::to_string(r.k);
    o += ',' + full(r.prov.rho);
    o += ',' + std::to_string(r.prov.n_internal);
    o += ',' + std::to_string(r.prov.d_max);
    o += ',' + std::to_string(r.prov.lambda_max);
    o += ',' + std::to_string(r.prov.skewed_categories ? 1 : 0);
    o += ',' + std::to_string(r.per_species ? 1 : 0);
    o += ',' + full(r.total_pd1);
    o += ',' + full(r.total_pd2);
    o += ',' + full(r.base_epd1);
    o += ',' + full(r.base_epd2);
    o += ',' + full(r.epd11);
    o += ',' + full(r.epd12);
    o += ',' + full(r.epd21);
    o += ',' + full(r.epd22);
    o += ',' + full(r.gap1);
    o += ',' + full(r.gap2);
    o += ',' + full(r.dissimilarity);
    o += ',' + std::to_string(r.intersection_size);
    for (size_t g = 0; g < 5; ++g) o += ',' + std::to_string(r.species_by_cat[g]);
    for (size_t g = 0; g < 5; ++g) o += ',' + std::to_string(r.protected_by_cat1[g]);
    for (size_t g = 0; g < 5; ++g) o += ',' + std::to_string(r.protected_by_cat2[g]);
    for (size_t g = 0; g < 5; ++g) o += ',' + full(r.category_probs[0][g]);
    for (size_t g = 0; g < 5; ++g) o += ',' + full(r.category_probs[1][g]);
    o += '\n';
  }
  return o;
}

std::string format_gen_manifest(const Instance& inst) {
  nlohmann::ordered_json j;
  j["master_seed"] = inst.prov.master_seed;
  j["instance_index"] = inst.prov.instance_index;
  j["n_species"] = inst.prov.n_species;
  j["n_internal"] = inst.prov.n_internal;
  j["d_max"] = inst.prov.d_max;
  j["lambda_max"] = inst.prov.lambda_max;
  j["ultrametric"] = inst.prov.ultrametric;
  j["skewed_categories"] = inst.prov.skewed_categories;
  j["per_species_probs"] = inst.per_species;
  j["rho"] = inst.prov.rho;
  j["k"] = inst.k;
  if (!inst.per_species) {
    j["scenario1_category_probs"] = inst.category_probs[0];
    j["scenario2_category_probs"] = inst.category_probs[1];
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw std::runtime_error("cannot create directory '" + p.parent_path().string() +
                               "': " + ec.message());
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush()) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace epd
