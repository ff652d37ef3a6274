#pragma once

#include <string>

namespace sheardiss::csv {

/// Shortest round-trip text for a double (%.17g); "nan" and "inf" spelled out.
std::string num(double v);

}  // namespace sheardiss::csv
