#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucutlass {

// Half-open source range. line/column are 1-based and refer to the start.
struct Span {
    int line = 1;
    int column = 1;
    std::size_t offset = 0;
    std::size_t length = 0;

    bool operator==(const Span&) const = default;
};

std::string to_string(const Span& span);

// Root of the typed error hierarchy. Every failure mode a caller can react to
// has its own subclass so call sites can catch precisely.
class Error : public std::runtime_error {
  public:
    explicit Error(std::string message) : std::runtime_error(std::move(message)) {}
};

// --- DSL front end ---------------------------------------------------------

class LexError : public Error {
  public:
    LexError(std::string message, Span span)
        : Error(to_string(span) + ": " + message), span_(span) {}
    const Span& span() const { return span_; }

  private:
    Span span_;
};

class ParseError : public Error {
  public:
    ParseError(std::string message, Span span, std::string expected = "")
        : Error(to_string(span) + ": " + message +
                (expected.empty() ? "" : " (expected " + expected + ")")),
          span_(span), expected_(std::move(expected)) {}
    const Span& span() const { return span_; }
    const std::string& expected() const { return expected_; }

  private:
    Span span_;
    std::string expected_;
};

// --- IR / compilation ------------------------------------------------------

class LowerError : public Error {
  public:
    using Error::Error;
};

class EmitError : public Error {
  public:
    using Error::Error;
};

// --- Analysis --------------------------------------------------------------

class SpecError : public Error {  // malformed problem specification
  public:
    using Error::Error;
};

class HwError : public Error {  // malformed hardware description
  public:
    using Error::Error;
};

class DomainError : public Error {  // argument outside mathematical domain
  public:
    using Error::Error;
};

class DivisionError : public Error {  // zero denominator in a ratio
  public:
    using Error::Error;
};

// --- Logs / metrics --------------------------------------------------------

class LogError : public Error {  // malformed run log
  public:
    using Error::Error;
};

class EmptySetError : public Error {
  public:
    using Error::Error;
};

class UniverseMismatchError : public Error {  // curves over different problem sets
  public:
    using Error::Error;
};

class GeomeanDomainError : public Error {  // no positive values to aggregate
  public:
    using Error::Error;
};

// --- Integrity -------------------------------------------------------------

class ProfileParseError : public Error {  // unreadable profiler output
  public:
    using Error::Error;
};

class LabelError : public Error {  // unknown reviewer label
  public:
    using Error::Error;
};

class IoError : public Error {  // file not found / unreadable / bad JSON shape
  public:
    using Error::Error;
};

}  // namespace ucutlass
