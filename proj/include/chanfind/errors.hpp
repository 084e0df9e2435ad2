#pragma once

#include <stdexcept>
#include <string>

namespace chanfind {

// Root of every error the engine throws. `kind()` is a stable tag used by the
// CLI's --json output and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CHANFIND_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  }

// channel-db
CHANFIND_DEFINE_ERROR(ParseError);
CHANFIND_DEFINE_ERROR(SchemaError);
CHANFIND_DEFINE_ERROR(DuplicateAddress);
CHANFIND_DEFINE_ERROR(RangeError);
CHANFIND_DEFINE_ERROR(EmptyList);
CHANFIND_DEFINE_ERROR(MissingLevel);

// selector
CHANFIND_DEFINE_ERROR(InvalidRequest);
CHANFIND_DEFINE_ERROR(BudgetExhausted);
CHANFIND_DEFINE_ERROR(BackendUnavailable);
CHANFIND_DEFINE_ERROR(InvalidAfterRetry);
CHANFIND_DEFINE_ERROR(TransportError);
CHANFIND_DEFINE_ERROR(SchemaViolationAfterRetry);
CHANFIND_DEFINE_ERROR(AuthError);

// finders
CHANFIND_DEFINE_ERROR(DatabaseTooLarge);
CHANFIND_DEFINE_ERROR(EmptyDescription);
CHANFIND_DEFINE_ERROR(DeadEnd);
CHANFIND_DEFINE_ERROR(UnknownComponent);
CHANFIND_DEFINE_ERROR(EmptyHints);
CHANFIND_DEFINE_ERROR(IterationLimitExceeded);
CHANFIND_DEFINE_ERROR(UnknownSystem);
CHANFIND_DEFINE_ERROR(UnknownFamily);
CHANFIND_DEFINE_ERROR(UnknownField);
CHANFIND_DEFINE_ERROR(UnknownTool);

// ontology
CHANFIND_DEFINE_ERROR(UnmappedFamily);
CHANFIND_DEFINE_ERROR(NoTemplateMatch);
CHANFIND_DEFINE_ERROR(QueryError);

// harness / cli
CHANFIND_DEFINE_ERROR(ConfigError);
CHANFIND_DEFINE_ERROR(UnknownPrefix);

#undef CHANFIND_DEFINE_ERROR

// Query text error with the byte offset where parsing stopped.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("SyntaxError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace chanfind
