#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wsd {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A malformed corpus record. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(const std::string& id)
      : Error("duplicate instance id '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class InsufficientDataError : public Error {
 public:
  InsufficientDataError(const std::string& sense, std::size_t have,
                        std::size_t need)
      : Error("sense '" + sense + "' has " + std::to_string(have) +
              " instances, " + std::to_string(need) + " required"),
        sense_(sense) {}
  const std::string& sense() const noexcept { return sense_; }

 private:
  std::string sense_;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class UnknownSenseError : public Error {
 public:
  explicit UnknownSenseError(const std::string& sense)
      : Error("unknown sense '" + sense + "'") {}
};

// Train/devtest/test splits share an instance id.
class ContaminationError : public Error {
 public:
  using Error::Error;
};

// Model and manifest loading.
class LoadError : public Error {
 public:
  using Error::Error;
};

class VersionError : public LoadError {
 public:
  using LoadError::LoadError;
};

class TruncatedError : public LoadError {
 public:
  using LoadError::LoadError;
};

class ChecksumError : public LoadError {
 public:
  using LoadError::LoadError;
};

class FormatError : public LoadError {
 public:
  using LoadError::LoadError;
};

}  // namespace wsd
