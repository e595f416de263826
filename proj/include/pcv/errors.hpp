#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pcv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(std::uint64_t step, const std::string& what)
        : Error("integration diverged at step " + std::to_string(step) + ": " + what), step_(step) {}
    std::uint64_t step() const noexcept { return step_; }

private:
    std::uint64_t step_;
};

class InsufficientData : public Error {
public:
    InsufficientData(std::size_t have, std::size_t required)
        : Error("insufficient data: " + std::to_string(have) + " samples, at least " +
                std::to_string(required) + " required"),
          required_(required) {}
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class DomainTooSmall : public Error {
public:
    using Error::Error;
};

class NonFiniteValue : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace pcv
