#ifndef NCCECH_ERROR_HPP
#define NCCECH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nccech {

enum class ErrorKind {
  InvalidArgument,  // precondition of an operation violated
  Arithmetic,       // division by zero, non-invertible scalar
  Rewrite,          // reduction budget exceeded, malformed rule
  Mismatch,         // parent / chain / ring mismatch
  Parse,            // malformed workspace text
  Reference,        // dangling name in a workspace
  Command,          // unknown command or missing argument
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Arithmetic: return "arithmetic";
    case ErrorKind::Rewrite: return "rewrite";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::Command: return "command";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nccech

#endif
