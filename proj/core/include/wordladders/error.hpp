#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordladders {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A malformed input file or document. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

// Request or document rejected by a contract check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class ForbiddenError : public Error {
 public:
  using Error::Error;
};

// Submission received after the match window closed.
class ExpiredError : public Error {
 public:
  using Error::Error;
};

// The player has exhausted the words of the current level pass.
class AdvancementDueError : public Error {
 public:
  AdvancementDueError() : Error("advancement check due") {}
};

}  // namespace wordladders
