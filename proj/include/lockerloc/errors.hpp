#ifndef LOCKERLOC_ERRORS_HPP
#define LOCKERLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lockerloc {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data violates a documented invariant (negative demand, zero attraction, ...).
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// A file or text payload could not be parsed; message carries field/position context.
class parse_error : public error {
public:
    explicit parse_error(const std::string& msg) : error(msg) {}
};

// A caller broke an API precondition (non-antichain restriction, y > x, bad index).
class contract_error : public error {
public:
    explicit contract_error(const std::string& msg) : error(msg) {}
};

// A numeric argument is outside the mathematical domain of the function.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

} // namespace lockerloc

#endif
