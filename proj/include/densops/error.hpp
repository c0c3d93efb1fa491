#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace densops {

/// Base of every domain error raised by the library. `kind()` is the stable
/// snake_case tag the CLI reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(detail), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& what)
        : Error("syntax", "offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name)
        : Error("unknown_identifier",
                "offset " + std::to_string(offset) + ": unknown identifier '" + name + "'"),
          name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define DENSOPS_DEFINE_ERROR(Name, tag)                                       \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& detail) : Error(tag, detail) {}      \
    };

DENSOPS_DEFINE_ERROR(InsufficientDomain, "insufficient_domain")
DENSOPS_DEFINE_ERROR(WeightMismatch, "weight_mismatch")
DENSOPS_DEFINE_ERROR(DegenerateRadicand, "degenerate_radicand")
DENSOPS_DEFINE_ERROR(KernelMismatch, "kernel_mismatch")
DENSOPS_DEFINE_ERROR(ShapeMismatch, "shape_mismatch")
DENSOPS_DEFINE_ERROR(DegenerateMap, "degenerate_map")
DENSOPS_DEFINE_ERROR(MissingInverse, "missing_inverse")
DENSOPS_DEFINE_ERROR(InverseMismatch, "inverse_mismatch")
DENSOPS_DEFINE_ERROR(SingularWeight, "singular_weight")
DENSOPS_DEFINE_ERROR(NotAFunction, "not_a_function")

#undef DENSOPS_DEFINE_ERROR

}  // namespace densops
