#pragma once

#include <stdexcept>
#include <string>

namespace tailrisk {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

struct DivergentIntegral : Error {
    explicit DivergentIntegral(const std::string& msg) : Error(msg) {}
};

struct TooFewTailSamples : Error {
    explicit TooFewTailSamples(const std::string& msg) : Error(msg) {}
};

struct DegenerateTail : Error {
    explicit DegenerateTail(const std::string& msg) : Error(msg) {}
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& msg, long line) : Error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
};

struct EmptyData : Error {
    explicit EmptyData(const std::string& msg) : Error(msg) {}
};

struct PlanOverrun : Error {
    explicit PlanOverrun(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace tailrisk
