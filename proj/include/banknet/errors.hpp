#ifndef BANKNET_ERRORS_HPP
#define BANKNET_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace banknet {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or mismatched tensor/image shapes.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Out-of-range scalar arguments (labels, augmentation parameters, ...).
class ValueError : public Error {
public:
    explicit ValueError(const std::string& msg) : Error(msg) {}
};

// Unbuildable network configurations and invalid split requests.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// File parsing and serialization failures.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Checkpoint load failures, with the failure mode attached.
class CheckpointError : public IoError {
public:
    enum class Kind { BadMagic, BadVersion, Truncated, BadChecksum, BadConfig };

    CheckpointError(Kind kind, const std::string& msg) : IoError(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Non-finite loss during training; carries where it happened.
class DivergedError : public Error {
public:
    DivergedError(std::size_t epoch, std::size_t step, const std::string& msg)
        : Error(msg), epoch_(epoch), step_(step) {}
    std::size_t epoch() const { return epoch_; }
    std::size_t step() const { return step_; }

private:
    std::size_t epoch_;
    std::size_t step_;
};

} // namespace banknet

#endif
