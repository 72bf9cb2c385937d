#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace combi {

/// Domain error carrying a stable kind tag. `what()` is always
/// `<kind>: <detail>` so callers and the CLI can match on the prefix.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace combi
