#pragma once

#include <functional>
#include <string_view>

namespace smotekit {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink. Passing an empty function restores
/// the default, which writes "warning: <msg>" to stderr.
void set_warning_sink(WarningSink sink);

/// Emits a warning through the current sink. Serialized; safe from any thread.
void warn(std::string_view message);

}  // namespace smotekit
