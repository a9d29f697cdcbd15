#pragma once

#include <stdexcept>
#include <string>

namespace homog {

enum class Errc {
  UnknownKind,
  InvalidBound,
  CarrierMismatch,
  OrderViolation,
  NotStandardInstance,
  UnknownPoint,
  GlueNotIsometric,
  EmptyGlue,
  ZeroDistance,
  KatetovViolation,
  DepthExceeded,
  GeneratorMismatch,
  NotMetricallyComplete,
  ZeroEpsilon,
  ParameterViolation,
  MalformedWord,
  BudgetExceeded,
  NotFree,
  PreconditionFailed,
  DomainMismatch,
  LengthMismatch,
  NotCentral,
  NotAclClosed,
  UsageError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::InvalidBound: return "InvalidBound";
    case Errc::CarrierMismatch: return "CarrierMismatch";
    case Errc::OrderViolation: return "OrderViolation";
    case Errc::NotStandardInstance: return "NotStandardInstance";
    case Errc::UnknownPoint: return "UnknownPoint";
    case Errc::GlueNotIsometric: return "GlueNotIsometric";
    case Errc::EmptyGlue: return "EmptyGlue";
    case Errc::ZeroDistance: return "ZeroDistance";
    case Errc::KatetovViolation: return "KatetovViolation";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::GeneratorMismatch: return "GeneratorMismatch";
    case Errc::NotMetricallyComplete: return "NotMetricallyComplete";
    case Errc::ZeroEpsilon: return "ZeroEpsilon";
    case Errc::ParameterViolation: return "ParameterViolation";
    case Errc::MalformedWord: return "MalformedWord";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotFree: return "NotFree";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotCentral: return "NotCentral";
    case Errc::NotAclClosed: return "NotAclClosed";
    case Errc::UsageError: return "UsageError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace homog
