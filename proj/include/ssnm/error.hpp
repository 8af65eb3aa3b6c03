#pragma once

#include <stdexcept>
#include <string>

namespace ssnm {

// Base for every error the library raises. The category drives the CLI
// exit code (validation: 2, numerical: 3, I/O: 4).
class Error : public std::runtime_error {
 public:
  enum class Category { Validation, Numerical, Io };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

#define SSNM_DEFINE_ERROR(Name, Cat)                   \
  class Name : public Error {                          \
   public:                                             \
    explicit Name(const std::string& what)             \
        : Error(Category::Cat, #Name ": " + what) {}   \
  }

SSNM_DEFINE_ERROR(InvalidArgument, Validation);
SSNM_DEFINE_ERROR(SparsityViolation, Validation);
SSNM_DEFINE_ERROR(DegenerateInput, Validation);
SSNM_DEFINE_ERROR(DimensionMismatch, Validation);
SSNM_DEFINE_ERROR(AnchorMismatch, Validation);
SSNM_DEFINE_ERROR(OracleMismatch, Validation);
SSNM_DEFINE_ERROR(NumericalOverflow, Numerical);
SSNM_DEFINE_ERROR(QuadratureNonConvergence, Numerical);
SSNM_DEFINE_ERROR(IoError, Io);

#undef SSNM_DEFINE_ERROR

}  // namespace ssnm
