#pragma once

#include <stdexcept>
#include <string>

namespace anisofreq {

enum class ErrorCode {
  InvalidArgument = 1,
  NegativeCrossTerm,
  ClassMembership,
  Mesh,
  Convergence,
  Io,
  Internal,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` one-to-one onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, const std::string& what, ErrorCode code = ErrorCode::InvalidArgument) {
  if (!cond) throw Error(code, what);
}

}  // namespace anisofreq
