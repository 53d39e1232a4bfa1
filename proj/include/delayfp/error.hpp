#pragma once

#include <stdexcept>
#include <string>

namespace delayfp {

enum class Errc {
  invalid_argument,
  codebook_infeasible,
  sync_infeasible,
  file_not_found,
  malformed_header,
  unsupported_format,
  io_failure,
  parse_error,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(Errc::invalid_argument, what);
}

} // namespace delayfp
