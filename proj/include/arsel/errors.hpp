#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arsel {

enum class ErrorCode {
    InvalidArgument,
    NotUnitRoot,
    UnstableStationaryPart,
    SingularGamma,
    SingularDesign,
    WindowTooShort,
    SeriesTooShort,
    InsufficientHistory,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Input errors are the caller's fault; the rest are numerical failures.
[[nodiscard]] bool is_input_error(ErrorCode code) noexcept;

/**
 * @brief Base class of every error raised by the library.
 *
 * Carries a stable machine-readable code next to the human message so that
 * the CLI can emit structured error records.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message)
        : Error(ErrorCode::InvalidArgument, message) {}
};

class NotUnitRoot : public Error {
public:
    explicit NotUnitRoot(const std::string& message)
        : Error(ErrorCode::NotUnitRoot, message) {}
};

class UnstableStationaryPart : public Error {
public:
    explicit UnstableStationaryPart(const std::string& message)
        : Error(ErrorCode::UnstableStationaryPart, message) {}
};

class SingularGamma : public Error {
public:
    explicit SingularGamma(const std::string& message)
        : Error(ErrorCode::SingularGamma, message) {}
};

/// Normal equations over regressor rows [first_row, last_row] could not be solved.
class SingularDesign : public Error {
public:
    SingularDesign(std::size_t order, std::ptrdiff_t first_row, std::ptrdiff_t last_row,
                   const std::string& detail);

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::ptrdiff_t first_row() const noexcept { return first_row_; }
    [[nodiscard]] std::ptrdiff_t last_row() const noexcept { return last_row_; }

private:
    std::size_t order_;
    std::ptrdiff_t first_row_;
    std::ptrdiff_t last_row_;
};

class WindowTooShort : public Error {
public:
    explicit WindowTooShort(const std::string& message)
        : Error(ErrorCode::WindowTooShort, message) {}
};

class SeriesTooShort : public Error {
public:
    explicit SeriesTooShort(const std::string& message)
        : Error(ErrorCode::SeriesTooShort, message) {}
};

class InsufficientHistory : public Error {
public:
    explicit InsufficientHistory(const std::string& message)
        : Error(ErrorCode::InsufficientHistory, message) {}
};

}  // namespace arsel
