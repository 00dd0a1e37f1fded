#pragma once
// Byte-deterministic report rendering: a key=value summary mirroring the
// batch statistics, a full-precision per-instance CSV, and a JSON manifest
// for generated instances. Identical inputs always render identical bytes —
// no timestamps, locales, thread counts, or machine identity leak in.

#include <span>
#include <string>

#include "epd/instance_gen.hpp"
#include "epd/sensitivity.hpp"

namespace epd {

// Human-oriented summary: config echo, pooled gap statistics as
// percentages with two decimals, and a snapshot of the instance holding
// the largest gap. Every value is recomputable from the CSV.
std::string format_summary(const BatchStats& stats, const ExperimentConfig& cfg,
                           uint64_t master_seed);

// Column names of the per-instance CSV, comma-separated (single line, no
// trailing newline). The same order as format_results_csv emits.
std::string results_csv_header();

// One row per instance, full %.17g precision on every real value.
std::string format_results_csv(std::span<const InstanceResult> results);

// JSON description of one generated instance: provenance, budget, and the
// drawn per-category probabilities. Stable key order.
std::string format_gen_manifest(const Instance& inst);

// Writes content to path, creating parent directories. Throws
// std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace epd
