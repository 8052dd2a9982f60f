#pragma once

#include <cstddef>
#include <functional>

namespace cflab {

/// Runs `fn` to completion on a thread with the given stack size, so deeply
/// recursive evaluations do not overflow the caller's stack. Exceptions
/// thrown by `fn` are rethrown in the caller.
void run_with_stack(std::size_t stack_bytes, const std::function<void()>& fn);

inline constexpr std::size_t kLargeStack = std::size_t{1} << 30;

}  // namespace cflab
