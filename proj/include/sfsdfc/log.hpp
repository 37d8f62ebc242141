#pragma once

#include <functional>
#include <string_view>

namespace sfsdfc {

using LogSink = std::function<void(std::string_view)>;

/// Replaces the warning sink (default: stderr). Returns the previous sink.
LogSink set_log_sink(LogSink sink);

void log_warning(std::string_view message);

}  // namespace sfsdfc
