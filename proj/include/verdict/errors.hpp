#pragma once

#include <stdexcept>
#include <string>

namespace verdict {

// Base for everything this library throws. The CLI maps InputError (and
// subclasses) to exit status 1 and any other Error to exit status 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied input: files, schemas, labels, flag values.
class InputError : public Error {
public:
    using Error::Error;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class SchemaError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    using InputError::InputError;
};

class EncodingError : public InputError {
public:
    using InputError::InputError;
};

// Data made training impossible (empty class after split, no dev records).
class TrainingError : public InputError {
public:
    using InputError::InputError;
};

// Non-finite values where finite ones are required.
class NumericalError : public Error {
public:
    using Error::Error;
};

// OS-level I/O failure (write failed, rename failed).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace verdict
