#pragma once

#include <stdexcept>
#include <string>

namespace nikstar {

/// Invalid configuration or arguments. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or lost precision. Exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical identity or certificate did not hold. Exit code 1.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation requested on a cut or support where the function is undefined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace nikstar
