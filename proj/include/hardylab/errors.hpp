#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

// Base of every error raised by the library. kind() is a short stable tag.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define HARDYLAB_ERROR(Name, tag)                                              \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(tag, what) {}           \
    };

HARDYLAB_ERROR(SizeError, "size")
HARDYLAB_ERROR(InsufficientDataError, "insufficient-data")
HARDYLAB_ERROR(ValidationError, "validation")
HARDYLAB_ERROR(BracketError, "bracket")
HARDYLAB_ERROR(ParameterError, "parameter")
HARDYLAB_ERROR(SingularityError, "singularity")
HARDYLAB_ERROR(DomainError, "domain")
HARDYLAB_ERROR(ResolutionError, "resolution")
HARDYLAB_ERROR(MethodInapplicableError, "method-inapplicable")
HARDYLAB_ERROR(DegenerateProfileError, "degenerate-profile")
HARDYLAB_ERROR(UnsupportedError, "unsupported")
HARDYLAB_ERROR(UsageError, "usage")

#undef HARDYLAB_ERROR

} // namespace hardylab
