#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

/// Exception carrying a machine-parseable code ("category:slug") next to the
/// human message. The CLI prints failures as a single `error:<code>` line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void throw_error(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace wulff
