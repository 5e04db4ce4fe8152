#ifndef RLAM_ERRORS_HPP
#define RLAM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace rlam {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceLocation {
    int line = 1;
    int column = 1;
};

class ParseError : public Error {
public:
    ParseError(SourceLocation where, std::string message, std::vector<std::string> expected = {});

    const SourceLocation& where() const { return where_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourceLocation where_;
    std::vector<std::string> expected_;
};

// Static errors carry the rule that failed and the offending subterm.
class TypeError : public Error {
public:
    TypeError(std::string rule, std::string subterm, std::string message);

    const std::string& rule() const { return rule_; }
    const std::string& subterm() const { return subterm_; }

private:
    std::string rule_;
    std::string subterm_;
};

class UnboundVariable : public TypeError {
public:
    explicit UnboundVariable(const std::string& name);
};

class ArityMismatch : public TypeError {
public:
    ArityMismatch(const std::string& prim, std::size_t expected, std::size_t got, std::string subterm);
};

class NotFirstOrder : public Error {
public:
    using Error::Error;
};

// Raised only on ill-typed input.
class EvalError : public Error {
public:
    using Error::Error;
};

class AdError : public Error {
public:
    using Error::Error;
};

class UnsupportedPrim : public Error {
public:
    using Error::Error;
};

class UndefinedVariable : public Error {
public:
    explicit UndefinedVariable(const std::string& name)
        : Error("logical variable '" + name + "' is not defined by the assignment"), name_(name) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class MissingAnnotation : public Error {
public:
    using Error::Error;
};

class InvalidRefType : public Error {
public:
    using Error::Error;
};

} // namespace rlam

#endif
