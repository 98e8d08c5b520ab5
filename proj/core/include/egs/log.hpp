#pragma once

#include <string>

namespace egs::log {

enum class Level { quiet, info, debug };

/// Reads SOLVER_LOG (quiet | info | debug); defaults to quiet.
Level level_from_env();
void set_level(Level level);
Level level();

void info(const std::string& message);
void debug(const std::string& message);
void warn(const std::string& message);

}  // namespace egs::log
