#pragma once

#include <stdexcept>
#include <string>

namespace channelforge {

enum class ErrorCode {
    Parse = 1,
    InvalidChannel = 2,
    Optimizer = 3,
    Inadmissible = 4,
    PlanInconsistent = 5,
    BadArgument = 6,
    Numeric = 7,
    Io = 8,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace channelforge
