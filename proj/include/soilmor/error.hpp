/**
 * @file error.hpp
 * @brief Exception hierarchy; every error carries a stable class name
 */

#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <utility>

namespace soilmor {

class Error : public std::exception {
public:
    Error(std::string kind, std::string message)
        : kind_(std::move(kind)), message_(std::move(message)) {
        compose();
    }

    const char* what() const noexcept override { return full_.c_str(); }

    /// Error class name, e.g. "UnstableStep". Used for CLI diagnostics.
    const std::string& kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    std::optional<std::size_t> step() const noexcept { return step_; }

    void attach_step(std::size_t k) {
        if (!step_) {
            step_ = k;
            compose();
        }
    }

private:
    void compose() {
        full_ = kind_ + ": ";
        if (step_) full_ += "step " + std::to_string(*step_) + ": ";
        full_ += message_;
    }

    std::string kind_;
    std::string message_;
    std::optional<std::size_t> step_;
    std::string full_;
};

#define SOILMOR_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(std::string message) : Error(#Name, std::move(message)) {} \
    };

SOILMOR_DEFINE_ERROR(NonFiniteState)
SOILMOR_DEFINE_ERROR(UnstableStep)
SOILMOR_DEFINE_ERROR(BadSensorIndex)
SOILMOR_DEFINE_ERROR(DimensionMismatch)
SOILMOR_DEFINE_ERROR(JacobianFailure)
SOILMOR_DEFINE_ERROR(SingularInnovation)
SOILMOR_DEFINE_ERROR(DegenerateReference)
SOILMOR_DEFINE_ERROR(ParseError)
SOILMOR_DEFINE_ERROR(IoError)

#undef SOILMOR_DEFINE_ERROR

/// Invalid parameter or configuration value; `key()` names the offender.
class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& message)
        : Error("ValidationError", key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace soilmor
