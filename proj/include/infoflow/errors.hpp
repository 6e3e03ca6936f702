#pragma once

#include <stdexcept>
#include <string>

namespace infoflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or violated value-range invariant.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A line of an input file could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& msg)
        : Error(path + ":" + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An input file contained no edges at all.
class EmptyGraphError : public Error {
public:
    explicit EmptyGraphError(const std::string& path)
        : Error("empty-graph: no edges found in " + path) {}
};

} // namespace infoflow
