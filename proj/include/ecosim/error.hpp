#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecosim {

// Data errors raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id) : Error("duplicate node id: " + id) {}
};

class UnknownPlatform : public Error {
public:
    explicit UnknownPlatform(const std::string& name) : Error("platform not declared: " + name) {}
};

class UnknownEndpoint : public Error {
public:
    explicit UnknownEndpoint(const std::string& id) : Error("event endpoint not registered: " + id) {}
};

class SourceNotHateCore : public Error {
public:
    explicit SourceNotHateCore(const std::string& id)
        : Error("link source is not a hate-core community: " + id) {}
};

class KindMismatch : public Error {
public:
    explicit KindMismatch(const std::string& what) : Error("link kind does not match target class: " + what) {}
};

class GraphSealed : public Error {
public:
    GraphSealed() : Error("graph is sealed; appends are rejected") {}
};

class GraphNotSealed : public Error {
public:
    GraphNotSealed() : Error("operation requires a sealed graph") {}
};

class OutOfTimeRange : public Error {
public:
    explicit OutOfTimeRange(const std::string& what) : Error("timestamp outside dataset range: " + what) {}
};

class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Referential-integrity failure; carries at most the first 20 offending lines.
class IntegrityError : public Error {
public:
    static constexpr std::size_t kMaxReported = 20;

    explicit IntegrityError(std::vector<std::string> problems)
        : Error(summarize(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string summarize(const std::vector<std::string>& problems) {
        std::string msg = "integrity check failed";
        for (const auto& p : problems) {
            msg += "\n  ";
            msg += p;
        }
        return msg;
    }

    std::vector<std::string> problems_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("invalid config: " + what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error("insufficient data: " + what) {}
};

class UnknownCommunity : public Error {
public:
    explicit UnknownCommunity(const std::string& id) : Error("unknown community: " + id) {}
};

class UnsupportedLaw : public Error {
public:
    explicit UnsupportedLaw(const std::string& what) : Error("unsupported attrition law: " + what) {}
};

class PastExtinction : public Error {
public:
    explicit PastExtinction(double t_ext)
        : Error("requested time is past extinction at t=" + std::to_string(t_ext)), extinction_time_(t_ext) {}

    double extinction_time() const noexcept { return extinction_time_; }

private:
    double extinction_time_;
};

class StepTooLarge : public Error {
public:
    StepTooLarge(double drift, double suggested_dt)
        : Error("invariant drift " + std::to_string(drift) + " exceeds tolerance; retry with dt <= " +
                std::to_string(suggested_dt)),
          drift_(drift), suggested_dt_(suggested_dt) {}

    double drift() const noexcept { return drift_; }
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double drift_;
    double suggested_dt_;
};

class InvalidPolicy : public Error {
public:
    explicit InvalidPolicy(const std::string& what) : Error("invalid moderation policy: " + what) {}
};

} // namespace ecosim
