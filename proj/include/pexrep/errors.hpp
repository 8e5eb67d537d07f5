#pragma once

#include <stdexcept>
#include <string>

namespace pexrep {

enum class ErrorKind {
  ManifestSyntax,
  ManifestSemantic,
  GeneratorFailure,
  IoFailure,
  UnresolvedRef,
  PluginMissing,
  UnknownTest,
  WrongTask,
  TestPassed,
  BackendFailure,
  MissingSourceFile,
  MissingGeneratedFile,
  UnknownLibraryClass,
  PackageCorrupt,
  InvalidName,
  InvariantViolation,
};

const char* to_string(ErrorKind kind);

// Error messages are stable strings: the validator compares them verbatim,
// so they must never embed absolute paths or other machine-local state.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pexrep
