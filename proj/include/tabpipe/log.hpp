#pragma once

#include <functional>
#include <iostream>
#include <string>

namespace tabpipe {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline const char* logLevelName(LogLevel l) {
    switch (l) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "?";
}

/// Line-oriented event sink. Defaults to stdout; tests swap in a capture
/// function.
class Logger {
public:
    using Sink = std::function<void(LogLevel, const std::string&)>;

    Logger() = default;
    explicit Logger(LogLevel level) : level_(level) {}

    void setLevel(LogLevel level) { level_ = level; }
    LogLevel level() const { return level_; }
    void setSink(Sink sink) { sink_ = std::move(sink); }

    void log(LogLevel level, const std::string& message) const {
        if (level > level_) return;
        if (sink_) {
            sink_(level, message);
        } else {
            std::cout << "[" << logLevelName(level) << "] " << message << "\n";
        }
    }

    void error(const std::string& m) const { log(LogLevel::Error, m); }
    void warn(const std::string& m) const { log(LogLevel::Warn, m); }
    void info(const std::string& m) const { log(LogLevel::Info, m); }
    void debug(const std::string& m) const { log(LogLevel::Debug, m); }

private:
    LogLevel level_ = LogLevel::Info;
    Sink sink_;
};

} // namespace tabpipe
