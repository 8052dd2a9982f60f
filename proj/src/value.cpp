#include "cflab/value.hpp"

#include "cflab/errors.hpp"

namespace cflab {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

BitString BitString::from_compact(std::string_view text) {
  BitString out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '0' && c != '1') {
      throw SyntaxError({1, i + 1}, std::string("not a bit: '") + c + "'");
    }
    out.push_back(c == '1');
  }
  return out;
}

BitString BitString::from_word(std::uint64_t word, std::size_t length) {
  BitString out;
  for (std::size_t i = length; i-- > 0;) out.push_back((word >> i) & 1u);
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::string BitString::compact() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string BitString::list() const {
  std::string s = "[";
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (i) s.push_back(',');
    s.push_back(bits_[i] ? '1' : '0');
  }
  s.push_back(']');
  return s;
}

std::string format_value(Value v, const BitString& input) {
  if (v.is_bool()) return v.as_bool() ? "True" : "False";
  std::string s = "[";
  for (std::size_t i = v.offset(); i < input.size(); ++i) {
    if (i != v.offset()) s.push_back(',');
    s.push_back(input[i] ? '1' : '0');
  }
  s.push_back(']');
  return s;
}

std::size_t EnvHash::operator()(const Env& env) const noexcept {
  std::size_t h = env.size();
  for (Value v : env) h = h * 0x9E3779B97F4A7C15ull + v.code() + 0x632BE59BD9B4E019ull;
  return h ^ (h >> 29);
}

}  // namespace cflab
