#pragma once

#include <stdexcept>
#include <string>

namespace surveyq {

// Input, schema, and file problems. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Computations that are undefined or infeasible for otherwise well-formed
// inputs. The CLI maps these to exit code 2.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

class SchemaError : public ValidationError {
public:
    explicit SchemaError(const std::string& what) : ValidationError(what) {}
};

class InvalidWeightsError : public ValidationError {
public:
    explicit InvalidWeightsError(const std::string& what) : ValidationError(what) {}
};

class SampleExceedsPopulationError : public ValidationError {
public:
    explicit SampleExceedsPopulationError(const std::string& what) : ValidationError(what) {}
};

class InvalidFactorError : public ValidationError {
public:
    explicit InvalidFactorError(const std::string& what) : ValidationError(what) {}
};

class InconsistentCountsError : public ValidationError {
public:
    explicit InconsistentCountsError(const std::string& what) : ValidationError(what) {}
};

class InvalidStagesError : public ValidationError {
public:
    explicit InvalidStagesError(const std::string& what) : ValidationError(what) {}
};

class OutOfRangeError : public ValidationError {
public:
    explicit OutOfRangeError(const std::string& what) : ValidationError(what) {}
};

class ImputationImpossibleError : public ValidationError {
public:
    explicit ImputationImpossibleError(const std::string& what) : ValidationError(what) {}
};

// Benchmark of exactly 0 or 1 makes the difficulty factor vanish; the ddc is
// undefined whenever the observed error is nonzero.
class DegenerateBenchmarkError : public ComputationError {
public:
    explicit DegenerateBenchmarkError(const std::string& what) : ComputationError(what) {}
};

class UndefinedCorrelationError : public ComputationError {
public:
    explicit UndefinedCorrelationError(const std::string& what) : ComputationError(what) {}
};

class InfeasibleScenarioError : public ComputationError {
public:
    explicit InfeasibleScenarioError(const std::string& what) : ComputationError(what) {}
};

class DegenerateResponseError : public ComputationError {
public:
    explicit DegenerateResponseError(const std::string& what) : ComputationError(what) {}
};

class OverflowGuardError : public ComputationError {
public:
    explicit OverflowGuardError(const std::string& what) : ComputationError(what) {}
};

}  // namespace surveyq
