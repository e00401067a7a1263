#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace growthfit {

// Library error with a stable machine-readable class tag. The CLI prints
// the tag verbatim so callers can branch on it without parsing prose.
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& message)
      : std::runtime_error(message), cls_(std::move(cls)) {}

  const std::string& cls() const noexcept { return cls_; }

 private:
  std::string cls_;
};

namespace errc {
inline constexpr const char* domain = "domain";
inline constexpr const char* invalid_params = "invalid_params";
inline constexpr const char* ingestion = "ingestion";
inline constexpr const char* insufficient_data = "insufficient_data";
inline constexpr const char* degenerate_sample = "degenerate_sample";
inline constexpr const char* numeric = "numeric";
inline constexpr const char* io = "io";
inline constexpr const char* usage = "usage";
}  // namespace errc

}  // namespace growthfit
