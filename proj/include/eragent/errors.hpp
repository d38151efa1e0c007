#pragma once

#include <stdexcept>
#include <string>

namespace eragent {

/// Base class for all framework errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class BackendUnavailable : public Error {
public:
    explicit BackendUnavailable(const std::string& msg) : Error(msg) {}
};

class BackendRejected : public Error {
public:
    BackendRejected(int status, std::string body)
        : Error("backend rejected request, status " + std::to_string(status) + ": " + body),
          status_(status),
          body_(std::move(body)) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

class EmptyCompletion : public Error {
public:
    EmptyCompletion() : Error("backend returned an empty completion") {}
};

class MissingVariable : public Error {
public:
    explicit MissingVariable(const std::string& name)
        : Error("template variable not bound: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class TemplateMalformed : public Error {
public:
    explicit TemplateMalformed(const std::string& msg) : Error(msg) {}
};

class UnparseableOutput : public Error {
public:
    explicit UnparseableOutput(const std::string& msg) : Error(msg) {}
};

class SchemaViolation : public Error {
public:
    explicit SchemaViolation(const std::string& field)
        : Error("structured output missing field: " + field), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class InvalidQuestion : public Error {
public:
    explicit InvalidQuestion(const std::string& msg) : Error(msg) {}
};

class RewriteFailed : public Error {
public:
    explicit RewriteFailed(const std::string& msg) : Error(msg) {}
};

class InvalidText : public Error {
public:
    explicit InvalidText(const std::string& msg) : Error(msg) {}
};

class IndexMissing : public Error {
public:
    IndexMissing() : Error("corpus is not indexed") {}
};

class SearchUnavailable : public Error {
public:
    explicit SearchUnavailable(const std::string& msg) : Error(msg) {}
};

class EmptyRetrieval : public Error {
public:
    explicit EmptyRetrieval(const std::string& msg) : Error(msg) {}
};

class ReaderFailed : public Error {
public:
    explicit ReaderFailed(const std::string& msg) : Error(msg) {}
};

class MemoryPersistFailed : public Error {
public:
    explicit MemoryPersistFailed(const std::string& msg) : Error(msg) {}
};

class DatasetMalformed : public Error {
public:
    explicit DatasetMalformed(const std::string& msg) : Error(msg) {}
};

class SampleTooLarge : public Error {
public:
    explicit SampleTooLarge(const std::string& msg) : Error(msg) {}
};

class EmptyEvaluation : public Error {
public:
    EmptyEvaluation() : Error("cannot aggregate an empty item list") {}
};

class JudgeUnavailable : public Error {
public:
    explicit JudgeUnavailable(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace eragent
