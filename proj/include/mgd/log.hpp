#pragma once

#include <string>

namespace mgd {

// Warnings go to stderr unless silenced (tests silence them).
void log_warning(const std::string& message);
void set_warnings_enabled(bool enabled);

} // namespace mgd
