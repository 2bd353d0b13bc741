#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace armas {

// Error with a stable machine-readable code ("UnsupportedEncoding", "DoesNotFit", ...).
// The CLI maps codes to exit codes and prints them as single-line JSON on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

} // namespace armas
