#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdmole {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad experiment description: unknown enum value, repeats < 1, etc.
/// The CLI maps this family to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problems with input files or their contents. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// --- hypervector arithmetic ---

class InvalidDimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidOperandError : public Error {
 public:
  using Error::Error;
};

/// Cosine against an all-zero vector; signals an empty class during training.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

// --- tokenization / parsing ---

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class MalformedSmilesError : public DataError {
 public:
  MalformedSmilesError(const std::string& what, std::size_t offset)
      : DataError(what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// --- datasets and splits ---

class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// A named CSV column is absent from the header.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class TooFewSamplesError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateStratificationError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyTestError : public DataError {
 public:
  using DataError::DataError;
};

// --- model ---

class SequenceTooShortError : public Error {
 public:
  using Error::Error;
};

class EmptyClassError : public DataError {
 public:
  using DataError::DataError;
};

class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

// --- metrics ---

class InvalidSimilarityError : public Error {
 public:
  using Error::Error;
};

/// Single-class input; the task is skipped and reported, not fatal.
class UndefinedAucError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdmole
