#pragma once

#include <stdexcept>
#include <string>

namespace al {

// Bad arguments to a library call (dimension mismatch, empty set, invalid index).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration (kernel/feature pairing, strategy parameters, missing labels).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV or manifest ingestion failure; the message names the row/column or path.
class IngestionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SplitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace al
