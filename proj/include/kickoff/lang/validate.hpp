#pragma once

#include <string>
#include <vector>

#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"
#include "kickoff/lang/ast.hpp"

namespace kickoff::lang {

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Resolves every name in `program` in place and returns one diagnostic per
/// violation found. An empty result means the program is checked.
std::vector<Diagnostic> check_program(Program& program, const FieldSpec& field);

/// Returns the annotated program or throws ValidationError listing every
/// violation.
Program validate(Program program, const FieldSpec& field);

/// parse_source + validate.
Program load_program(std::string_view source, const FieldSpec& field);

}  // namespace kickoff::lang
