#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

// Rejected input: caller handed us something that violates a precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DimensionError : public ValidationError {
public:
    explicit DimensionError(const std::string& msg) : ValidationError(msg) {}
};

// A computed value broke an invariant that should hold by construction.
class InternalConsistencyError : public std::logic_error {
public:
    explicit InternalConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

// Game-spec document errors, one class per category so callers can
// report them distinctly.
class SpecSyntaxError : public ValidationError {
public:
    SpecSyntaxError(const std::string& msg, std::size_t line, std::size_t column)
        : ValidationError(msg), line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

class SpecSchemaError : public ValidationError {
public:
    SpecSchemaError(const std::string& msg, std::string path)
        : ValidationError(msg), field_path(std::move(path)) {}
    std::string field_path;
};

class SpecSemanticError : public ValidationError {
public:
    explicit SpecSemanticError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace qgame
