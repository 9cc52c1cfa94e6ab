#ifndef GAMELAB_DETAIL_IO_UTIL_HPP
#define GAMELAB_DETAIL_IO_UTIL_HPP

#include <charconv>
#include <string>

namespace gamelab::detail {

/// Shortest round-trip decimal form of a double; keeps emitted artifacts
/// byte-stable across reruns.
inline std::string fmt(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace gamelab::detail

#endif
