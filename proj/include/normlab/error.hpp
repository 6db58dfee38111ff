#pragma once

#include <stdexcept>
#include <string>

namespace normlab {

/// Base of every error raised by the library. `kind()` is a stable tag used
/// by the CLI to pick exit codes and by reports to name the failure.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define NORMLAB_ERROR(Name)                                                    \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

NORMLAB_ERROR(ParseError);
NORMLAB_ERROR(NotPseudoPolynomial);
NORMLAB_ERROR(AmbiguousValue);
NORMLAB_ERROR(DomainError);
NORMLAB_ERROR(NotDefined);
NORMLAB_ERROR(BlockSpaceTooLarge);
NORMLAB_ERROR(InvalidWindow);
NORMLAB_ERROR(DeltaTooLarge);
NORMLAB_ERROR(NoBound);
NORMLAB_ERROR(ConfigError);

#undef NORMLAB_ERROR

}  // namespace normlab
