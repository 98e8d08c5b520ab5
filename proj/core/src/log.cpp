#include "egs/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string_view>

namespace egs::log {

namespace {

std::atomic<Level> current{level_from_env()};

std::shared_ptr<spdlog::logger> logger() {
    static auto instance = [] {
        auto l = spdlog::stderr_color_mt("egs");
        l->set_pattern("[%H:%M:%S.%e] [%l] %v");
        l->set_level(spdlog::level::debug);
        return l;
    }();
    return instance;
}

}  // namespace

Level level_from_env() {
    const char* env = std::getenv("SOLVER_LOG");
    if (env == nullptr) return Level::quiet;
    const std::string_view v(env);
    if (v == "debug") return Level::debug;
    if (v == "info") return Level::info;
    return Level::quiet;
}

void set_level(Level l) { current = l; }
Level level() { return current; }

void info(const std::string& message) {
    if (current.load() != Level::quiet) logger()->info(message);
}

void debug(const std::string& message) {
    if (current.load() == Level::debug) logger()->debug(message);
}

void warn(const std::string& message) {
    if (current.load() != Level::quiet) logger()->warn(message);
}

}  // namespace egs::log
