#include "dpnls/text_io.hpp"

#include <cstdio>

namespace dpnls {

std::string format_double(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

std::string format_double(double x) { return format_double(x, 17); }

}  // namespace dpnls
