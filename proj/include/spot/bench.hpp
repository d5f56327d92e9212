#pragma once

// Timing and communication table for the twelve protocol algorithms.

#include <string>
#include <vector>

#include "spot/entities.hpp"

namespace spot {

struct BenchVariant {
  bool parallel = false;
  bool preprocess = false;
  std::string name() const;  // baseline | mt | pre | mt+pre
  static BenchVariant parse(std::string_view s);
  static std::vector<BenchVariant> all();
};

struct BenchOptions {
  SecurityLevel level = SecurityLevel::k112;
  std::size_t runs = 100;
  std::vector<std::string> algorithms;  // empty: all
  std::vector<BenchVariant> variants = {BenchVariant{}};
  std::string seed = "spot-bench";
};

struct BenchRow {
  std::string algorithm, entity, variant;
  std::size_t runs = 0;
  double mean_ms = 0, stddev_ms = 0, min_ms = 0;
  bool has_comm = false;
  ElementCount comm;
  std::string comm_note;
  // Every run of the variant produced the same verdict or output as baseline.
  bool consistent = true;
};

struct BenchReport {
  SecurityLevel level = SecurityLevel::k112;
  std::size_t runs = 0;
  unsigned hardware_threads = 0;
  std::vector<BenchRow> rows;

  const BenchRow* find(std::string_view algorithm, std::string_view variant = "baseline") const;
  std::string table() const;
  Json to_json() const;
};

// Names in table order.
const std::vector<std::string>& bench_algorithms();

// Throws MalformedInput on an unknown algorithm name.
BenchReport run_bench(const BenchOptions& opt);

}  // namespace spot
