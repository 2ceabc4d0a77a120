#pragma once

#include <stdexcept>
#include <string>

namespace mrds {

enum class ErrorKind {
    InvalidPoint,
    InvalidMap,
    InvalidArgument,
    Irreducible,
    Stochasticity,
    NumericFailure,
    Unsupported,
    SeedFailure,
    BudgetExceeded,
    Resolution,
    Schema,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mrds
