#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cflab/analysis.hpp"
#include "cflab/eval.hpp"
#include "cflab/nondet.hpp"
#include "cflab/value.hpp"

namespace cflab {

/// Flat run record. Keys appear in the order of `record_columns()`.
struct Record {
  std::string engine;
  std::string program;
  std::size_t input_len = 0;
  /// "True", "False", a list, "timeout", "stuck" or "error".
  std::string result;
  std::uint64_t time_steps = 0;
  std::uint64_t max_frames = 0;
  std::uint64_t max_space_bits = 0;
  std::uint64_t cache_entries = 0;
  std::uint64_t distinct_configs = 0;
  bool overlap = false;
  std::uint64_t tree_depth = 0;
  std::uint64_t call_history_length = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t suffix_violations = 0;
  std::uint64_t reach_bound = 0;
};

const std::vector<std::string>& record_columns();

Record make_record(const RunStats& s, std::string_view program, const BitString& x);
Record make_record(const ConfirmStats& s, std::string_view program, const BitString& x);
Record make_record(const SaturationStats& s, std::string_view program, const BitString& x);
Record make_record(const SearchStats& s, std::string_view program, const BitString& x);

nlohmann::ordered_json to_json(const Record& r);
std::string csv_header();
std::string to_csv(const Record& r);
std::string to_human(const Record& r);

nlohmann::ordered_json to_json(const CallShapeReport& r);

}  // namespace cflab
