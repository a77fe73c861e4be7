#ifndef GOVPAT_ERRORS_HPP
#define GOVPAT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace govpat {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSegment : Error {
    DegenerateSegment() : Error("segment endpoints coincide") {}
};

struct TooFewSamples : Error {
    explicit TooFewSamples(std::size_t got)
        : Error("need at least 2 samples, got " + std::to_string(got)) {}
};

struct NonMonotoneTime : Error {
    explicit NonMonotoneTime(std::size_t row)
        : Error("time values must be strictly increasing (row " + std::to_string(row) + ")"),
          row(row) {}
    std::size_t row;
};

struct DuplicateClass : Error {
    explicit DuplicateClass(int class_id)
        : Error("duplicate curve for class " + std::to_string(class_id)) {}
};

struct DimensionMismatch : Error {
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("feature dimension mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

struct EmptyWindow : Error {
    EmptyWindow() : Error("window holds no samples") {}
};

struct OffsetOutOfRange : Error {
    OffsetOutOfRange(double t_offset, double t_end)
        : Error("offset " + std::to_string(t_offset) + " outside [0, " +
                std::to_string(t_end) + "]") {}
};

struct EmptyPattern : Error {
    EmptyPattern() : Error("governing pattern holds no curves") {}
};

struct InvalidClass : Error {
    InvalidClass(int class_id, std::size_t class_count)
        : Error("class " + std::to_string(class_id) + " outside 0.." +
                std::to_string(class_count == 0 ? 0 : class_count - 1)) {}
};

struct MissingColumn : Error {
    explicit MissingColumn(const std::string& name)
        : Error("column '" + name + "' not found in header") {}
};

struct ParseError : Error {
    ParseError(std::size_t row, const std::string& detail)
        : Error("row " + std::to_string(row) + ": " + detail), row(row) {}
    std::size_t row;
};

}  // namespace govpat

#endif
