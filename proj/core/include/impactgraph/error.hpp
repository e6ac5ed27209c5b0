#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace impactgraph {

/// Base of every error raised by the library. Callers that only need a
/// message can catch this; tests and the CLI match on the concrete types.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// graph-core

class EmptyVocabulary : public Error {
public:
    EmptyVocabulary() : Error("vocabulary has no variables") {}
};

class DuplicateVariable : public Error {
public:
    explicit DuplicateVariable(std::string name)
        : Error("duplicate variable after normalization: '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(std::string name)
        : Error("variable not in vocabulary: '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class SelfLoop : public Error {
public:
    explicit SelfLoop(std::string name)
        : Error("self-loop on variable '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class VocabularyMismatch : public Error {
public:
    VocabularyMismatch() : Error("graphs are defined over different vocabularies") {}
    explicit VocabularyMismatch(const std::string& detail)
        : Error("graphs are defined over different vocabularies: " + detail) {}
};

class InvalidGraph : public Error {
public:
    using Error::Error;
};

// reference-compiler

class RecordNotInBase : public Error {
public:
    RecordNotInBase(std::string cause, std::string effect)
        : Error("evidence record (" + cause + ", " + effect + ") is not an edge of the base chain"),
          cause_(std::move(cause)),
          effect_(std::move(effect)) {}
    const std::string& cause() const noexcept { return cause_; }
    const std::string& effect() const noexcept { return effect_; }

private:
    std::string cause_;
    std::string effect_;
};

class InvalidRecord : public Error {
public:
    InvalidRecord(std::size_t row, const std::string& reason)
        : Error("invalid evidence record at row " + std::to_string(row) + ": " + reason), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// corpus

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string name)
        : Error("missing column '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class InvalidBatchSize : public Error {
public:
    InvalidBatchSize() : Error("batch size must be at least 1") {}
};

// extraction

class EmptyBatch : public Error {
public:
    EmptyBatch() : Error("cannot render a prompt for an empty batch") {}
};

/// Raised by a ModelClient for transport, quota or protocol failures.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A batch failed during an extraction run; the run is aborted.
class ClientError : public Error {
public:
    ClientError(std::size_t batch_index, const std::string& cause)
        : Error("model client failed on batch " + std::to_string(batch_index) + ": " + cause),
          batch_index_(batch_index),
          cause_(cause) {}
    std::size_t batch_index() const noexcept { return batch_index_; }
    const std::string& cause() const noexcept { return cause_; }

private:
    std::size_t batch_index_;
    std::string cause_;
};

// metrics

class DegenerateReference : public Error {
public:
    explicit DegenerateReference(std::size_t nodes)
        : Error("reference graph needs at least 2 nodes for nSHD, has " + std::to_string(nodes)) {}
};

// stats-report

class AllRefused : public Error {
public:
    AllRefused() : Error("every run in the series was refused") {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t a, std::size_t b)
        : Error("paired samples differ in length: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class TooFewSamples : public Error {
public:
    explicit TooFewSamples(std::size_t n)
        : Error("paired t-test needs at least 2 samples, got " + std::to_string(n)) {}
};

class InconsistentRunCounts : public Error {
public:
    using Error::Error;
};

// cli-orchestrator

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace impactgraph
