#include "cflab/report.hpp"

#include <sstream>

namespace cflab {

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "engine",         "program",          "input_len",  "result",
      "time_steps",     "max_frames",       "max_space_bits", "cache_entries",
      "distinct_configs", "overlap",        "tree_depth", "call_history_length",
      "cache_hits",     "suffix_violations", "reach_bound"};
  return cols;
}

Record make_record(const RunStats& s, std::string_view program, const BitString& x) {
  Record r;
  r.engine = s.engine;
  r.program = program;
  r.input_len = x.size();
  r.result = format_value(s.result, x);
  r.time_steps = s.time_steps;
  r.max_frames = s.max_frames;
  r.max_space_bits = s.max_space_bits;
  r.cache_entries = s.cache_entries;
  r.distinct_configs = s.distinct_configs;
  r.overlap = s.overlap();
  r.tree_depth = s.tree_depth;
  r.call_history_length = s.call_history_length;
  r.cache_hits = s.cache_hits;
  r.suffix_violations = s.suffix_violations;
  return r;
}

Record make_record(const ConfirmStats& s, std::string_view program, const BitString& x) {
  Record r;
  r.engine = "confirm";
  r.program = program;
  r.input_len = x.size();
  r.result = format_value(s.result, x);
  r.time_steps = s.tree_size;
  r.max_frames = s.max_confirm_frames;
  return r;
}

Record make_record(const SaturationStats& s, std::string_view program, const BitString& x) {
  Record r;
  r.engine = "ncf-saturate";
  r.program = program;
  r.input_len = x.size();
  r.result = s.accepted ? "True" : "False";
  r.time_steps = s.body_evaluations;
  r.cache_entries = s.triples;
  r.distinct_configs = s.configs;
  return r;
}

Record make_record(const SearchStats& s, std::string_view program, const BitString& x) {
  Record r;
  r.engine = "ncf-search";
  r.program = program;
  r.input_len = x.size();
  r.result = s.accepted ? "True" : "False";
  r.time_steps = s.total_steps;
  return r;
}

nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json j;
  j["engine"] = r.engine;
  j["program"] = r.program;
  j["input_len"] = r.input_len;
  j["result"] = r.result;
  j["time_steps"] = r.time_steps;
  j["max_frames"] = r.max_frames;
  j["max_space_bits"] = r.max_space_bits;
  j["cache_entries"] = r.cache_entries;
  j["distinct_configs"] = r.distinct_configs;
  j["overlap"] = r.overlap;
  j["tree_depth"] = r.tree_depth;
  j["call_history_length"] = r.call_history_length;
  j["cache_hits"] = r.cache_hits;
  j["suffix_violations"] = r.suffix_violations;
  j["reach_bound"] = r.reach_bound;
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_header() {
  std::string out;
  for (const auto& c : record_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string to_csv(const Record& r) {
  std::string out;
  const auto j = to_json(r);
  for (const auto& [key, value] : j.items()) {
    if (!out.empty()) out += ',';
    out += value.is_string() ? csv_field(value.get<std::string>()) : value.dump();
  }
  return out;
}

std::string to_human(const Record& r) {
  std::ostringstream out;
  const auto j = to_json(r);
  for (const auto& [key, value] : j.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  return out.str();
}

nlohmann::ordered_json to_json(const CallShapeReport& r) {
  nlohmann::ordered_json j;
  j["is_cftr"] = r.is_cftr;
  j["all_calls_linear"] = r.all_calls_linear;
  j["definitions"] = nlohmann::ordered_json::array();
  for (const auto& d : r.definitions) {
    j["definitions"].push_back({{"name", d.name}, {"alpha", std::string(to_string(d.alpha))}});
  }
  j["sites"] = nlohmann::ordered_json::array();
  for (const auto& s : r.sites) {
    j["sites"].push_back({{"definition", s.definition},
                          {"callee", s.callee},
                          {"path", s.path},
                          {"kind", std::string(to_string(s.kind))}});
  }
  return j;
}

}  // namespace cflab
