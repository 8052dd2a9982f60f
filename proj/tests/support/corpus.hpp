#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cflab/parser.hpp"

namespace cflab::testing {

inline std::string corpus_path(const std::string& file) {
  return std::string(CFLAB_CORPUS_DIR) + "/" + file;
}

inline std::string read_corpus(const std::string& file) {
  std::ifstream in(corpus_path(file));
  if (!in) throw std::runtime_error("missing corpus file " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load_corpus(const std::string& file, bool ncf = false) {
  ProgramOptions po;
  po.allow_choose = ncf;
  return parse_program(read_corpus(file), po);
}

}  // namespace cflab::testing
