// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace magsys {

enum class ErrorCode {
  InvalidArgument = 1,
  ZollRegimeViolation,
  QuadratureFailure,
  StepFailure,
  NoReturn,
  TangencyError,
  NoConvergence,
  DivergedFromFamily,
  CapNotFound,
  NoOrbitsFound,
  ParseError,
  ValidationError,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the C
/// API maps them one-to-one onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace magsys
