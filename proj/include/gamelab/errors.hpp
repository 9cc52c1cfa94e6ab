#ifndef GAMELAB_ERRORS_HPP
#define GAMELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gamelab {

/// Invalid configuration (bad market/spec/run parameters). CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A Brownian path ended before the requested number of exits occurred.
/// Callers retry with a longer horizon cap; the same seed reproduces the
/// path prefix, so retries are deterministic.
class path_exhausted : public std::runtime_error {
public:
    explicit path_exhausted(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gamelab

#endif
