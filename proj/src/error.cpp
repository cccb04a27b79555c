// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/error.hpp"

namespace magsys {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZollRegimeViolation: return "ZollRegimeViolation";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoReturn: return "NoReturn";
    case ErrorCode::TangencyError: return "TangencyError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DivergedFromFamily: return "DivergedFromFamily";
    case ErrorCode::CapNotFound: return "CapNotFound";
    case ErrorCode::NoOrbitsFound: return "NoOrbitsFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace magsys
