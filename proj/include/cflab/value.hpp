#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cflab {

/// An input word over {0,1}.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses the compact form, e.g. "1011". Throws SyntaxError.
  static BitString from_compact(std::string_view text);
  /// Low `length` bits of `word`, most significant first.
  static BitString from_word(std::uint64_t word, std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitString& other);

  std::string compact() const;
  /// List form, e.g. "[1,0,1,1]".
  std::string list() const;

  auto operator<=>(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// An element of V_x: a boolean (which doubles as a bit) or a suffix of the
/// run's input, identified by its start offset. Offset n is the empty list.
class Value {
 public:
  constexpr Value() = default;

  static constexpr Value boolean(bool b) { return Value(b ? 1u : 0u); }
  static constexpr Value suffix(std::uint32_t offset) { return Value(offset + 2); }
  static constexpr Value from_code(std::uint32_t code) { return Value(code); }

  constexpr bool is_bool() const { return code_ < 2; }
  constexpr bool is_suffix() const { return code_ >= 2; }
  constexpr bool as_bool() const { return code_ == 1; }
  constexpr std::uint32_t offset() const { return code_ - 2; }
  /// Dense index into V_x: False, True, then suffixes by offset.
  constexpr std::uint32_t code() const { return code_; }

  constexpr auto operator<=>(const Value&) const = default;

 private:
  constexpr explicit Value(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

inline constexpr Value kTrue = Value::boolean(true);
inline constexpr Value kFalse = Value::boolean(false);

/// Argument values of one activation, in parameter order.
using Env = std::vector<Value>;

/// |V_x| for an input of length n.
inline std::size_t value_space_size(std::size_t n) { return n + 3; }

/// Range check: Bool, or a suffix of an input of length n.
inline bool in_value_space(Value v, std::size_t n) {
  return v.is_bool() || v.offset() <= n;
}

/// "True", "False", or the list form of the suffix.
std::string format_value(Value v, const BitString& input);

struct EnvHash {
  std::size_t operator()(const Env& env) const noexcept;
};

}  // namespace cflab
