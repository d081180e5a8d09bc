#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spce {

// Broad failure category, used by the CLI to pick an exit code.
enum class ErrorKind { config, data, io };

// All library errors carry a short machine-readable code ("protocol-mismatch",
// "invalid-rank", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

[[noreturn]] inline void throw_config(const std::string& code, const std::string& msg) {
    throw Error(ErrorKind::config, code, msg);
}
[[noreturn]] inline void throw_data(const std::string& code, const std::string& msg) {
    throw Error(ErrorKind::data, code, msg);
}
[[noreturn]] inline void throw_io(const std::string& code, const std::string& msg) {
    throw Error(ErrorKind::io, code, msg);
}

}  // namespace spce
