#ifndef SHNOL_CSV_HPP
#define SHNOL_CSV_HPP

// Minimal CSV writer: fixed header row, comma separator, LF endings and
// 17-significant-digit floats so that outputs are reproducible byte for byte.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

namespace shnol::csv {

inline std::string format(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format(std::int64_t x) { return std::to_string(x); }
inline std::string format(int x) { return std::to_string(x); }
inline std::string format(bool x) { return x ? "1" : "0"; }
inline std::string format(std::string_view s) { return std::string(s); }
inline std::string format(const char* s) { return std::string(s); }
inline std::string format(const std::string& s) { return s; }

/// Writes one comma-separated row terminated by '\n'.
template <typename... Ts>
void row(std::ostream& os, const Ts&... fields) {
    bool first = true;
    ((os << (first ? "" : ",") << format(fields), first = false), ...);
    os << '\n';
}

}  // namespace shnol::csv

#endif  // SHNOL_CSV_HPP
