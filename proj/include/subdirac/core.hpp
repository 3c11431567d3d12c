#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace subdirac {

using cx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& m) : Error("invalid-dimension", m) {}
};

struct FormError : Error {
    explicit FormError(const std::string& m) : Error("invalid-form", m) {}
};

struct InclusionError : Error {
    explicit InclusionError(const std::string& m) : Error("invalid-inclusion", m) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("validation", m) {}
};

struct LiftError : Error {
    explicit LiftError(const std::string& m) : Error("lift-ambiguity", m) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& m) : Error("degenerate-immersion", m) {}
};

struct FrameError : Error {
    explicit FrameError(const std::string& m) : Error("frame", m) {}
};

struct FocalRadiusError : Error {
    explicit FocalRadiusError(const std::string& m) : Error("focal-radius", m) {}
};

struct ConformalityError : Error {
    explicit ConformalityError(const std::string& m) : Error("non-conformal-chart", m) {}
};

struct UnsupportedCaseError : Error {
    explicit UnsupportedCaseError(const std::string& m) : Error("unsupported-case", m) {}
};

struct SpinorError : Error {
    explicit SpinorError(const std::string& m) : Error("inconsistent-spinor", m) {}
};

struct DegenerateError : Error {
    explicit DegenerateError(const std::string& m) : Error("degenerate", m) {}
};

struct CatalogError : Error {
    explicit CatalogError(const std::string& m) : Error("catalog", m) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io", m) {}
};

struct AccuracyError : Error {
    explicit AccuracyError(const std::string& m) : Error("accuracy", m) {}
};

} // namespace subdirac
