#include "sfsdfc/log.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace sfsdfc {

namespace {

std::mutex sink_mutex;

LogSink& sink() {
  static LogSink current = [](std::string_view message) { std::cerr << "warning: " << message << '\n'; };
  return current;
}

}  // namespace

LogSink set_log_sink(LogSink replacement) {
  std::lock_guard lock(sink_mutex);
  return std::exchange(sink(), std::move(replacement));
}

void log_warning(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

}  // namespace sfsdfc
