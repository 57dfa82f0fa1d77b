#ifndef QSERIES_ERROR_HPP
#define QSERIES_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qseries
{

// Root of every error the library raises. kind() is a stable identifier used
// in reports and CLI output.
class error : public std::runtime_error
{
public:
    error(std::string kind, const std::string &what)
        : std::runtime_error(what), kind_(std::move(kind))
    {
    }

    const std::string &kind() const noexcept
    {
        return kind_;
    }

private:
    std::string kind_;
};

#define QSERIES_DEFINE_ERROR(Name)                                                                                     \
    class Name : public error                                                                                          \
    {                                                                                                                  \
    public:                                                                                                            \
        explicit Name(const std::string &what) : error(#Name, what) {}                                                 \
    };

// series-core
QSERIES_DEFINE_ERROR(EmptySeries)
QSERIES_DEFINE_ERROR(BeyondTruncation)
QSERIES_DEFINE_ERROR(PoleAtSpecialization)
QSERIES_DEFINE_ERROR(PrecisionError)
// qfunctions
QSERIES_DEFINE_ERROR(NegativeExponentProduct)
QSERIES_DEFINE_ERROR(DegenerateZ)
// hecke-sums
QSERIES_DEFINE_ERROR(DivergentSpec)
// verify
QSERIES_DEFINE_ERROR(ConstraintViolation)
QSERIES_DEFINE_ERROR(NonconvergentPoint)
QSERIES_DEFINE_ERROR(PoleTooClose)
QSERIES_DEFINE_ERROR(NoConvergence)
QSERIES_DEFINE_ERROR(ConfigError)
QSERIES_DEFINE_ERROR(Unsupported)
// dsl
QSERIES_DEFINE_ERROR(UnboundVariable)
QSERIES_DEFINE_ERROR(EvalError)

#undef QSERIES_DEFINE_ERROR

// Lexer/parser errors carry the byte offset into the source text.
class LexError : public error
{
public:
    LexError(std::size_t offset, const std::string &what)
        : error("LexError", what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const noexcept
    {
        return offset_;
    }

private:
    std::size_t offset_;
};

class ParseError : public error
{
public:
    ParseError(std::size_t offset, const std::string &what)
        : error("ParseError", what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }
    std::size_t offset() const noexcept
    {
        return offset_;
    }

private:
    std::size_t offset_;
};

} // namespace qseries

#endif
