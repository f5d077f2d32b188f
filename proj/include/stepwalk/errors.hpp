#pragma once

#include <stdexcept>
#include <string>

namespace stepwalk {

// Every library error derives from Error so the CLI can map it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// a == 1 (p = 1, alpha = 1): drift and sigma^2 are undefined.
class DegenerateMemory : public Error {
 public:
  explicit DegenerateMemory(const std::string& what_arg =
                                "degenerate memory (a = 1): drift and sigma^2 are undefined")
      : Error(what_arg) {}
};

class CheckpointOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidMemoryCutoff : public Error {
 public:
  using Error::Error;
};

class WrongRegime : public Error {
 public:
  using Error::Error;
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("empty sample") {}
};

class NonpositiveScale : public Error {
 public:
  NonpositiveScale() : Error("scale must be positive") {}
};

class InsufficientEnsemble : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stepwalk
