#pragma once

#include <stdexcept>
#include <string>

namespace claimforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// An aggregate was requested over an empty collection.
class NoDataError : public Error {
  public:
    using Error::Error;
};

/// Malformed on-disk input (corpus, evidence, config, results files).
class FormatError : public Error {
  public:
    using Error::Error;
};

/// A pipeline stage failed; `stage()` names it.
class StageError : public Error {
  public:
    StageError(std::string stage, std::string const& what)
        : Error(stage + ": " + what), m_stage(std::move(stage))
    {}

    [[nodiscard]] auto stage() const -> std::string const& { return m_stage; }

  private:
    std::string m_stage;
};

}  // namespace claimforge
