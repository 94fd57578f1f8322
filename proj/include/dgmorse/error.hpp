#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgm {

enum class ErrorCode {
  MissingTableEntry,
  WindowOverflow,
  DSquaredNonzero,
  UnsupportedRing,
  NoGroupDeclaration,
  NotAChainMap,
  NotAHomotopy,
  NotModuleMorphism,
  NoInvolution,
  InconsistentCharacter,
  ActionNotGroupFactored,
  PairingMismatch,
  FieldRequired,
  ContextMismatch,
  DegreeMismatch,
  UnknownExample,
  UnknownTag,
  SyntaxError,
  UnresolvedName,
  SchemaViolation,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingTableEntry: return "MissingTableEntry";
    case ErrorCode::WindowOverflow: return "WindowOverflow";
    case ErrorCode::DSquaredNonzero: return "DSquaredNonzero";
    case ErrorCode::UnsupportedRing: return "UnsupportedRing";
    case ErrorCode::NoGroupDeclaration: return "NoGroupDeclaration";
    case ErrorCode::NotAChainMap: return "NotAChainMap";
    case ErrorCode::NotAHomotopy: return "NotAHomotopy";
    case ErrorCode::NotModuleMorphism: return "NotModuleMorphism";
    case ErrorCode::NoInvolution: return "NoInvolution";
    case ErrorCode::InconsistentCharacter: return "InconsistentCharacter";
    case ErrorCode::ActionNotGroupFactored: return "ActionNotGroupFactored";
    case ErrorCode::PairingMismatch: return "PairingMismatch";
    case ErrorCode::FieldRequired: return "FieldRequired";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedName: return "UnresolvedName";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

/// Every failure raised by the engine carries one of the codes above; the
/// message holds the witnessing data (generator names, degrees, residuals).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dgm
