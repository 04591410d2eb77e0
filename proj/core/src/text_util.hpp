#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "lifmap/errors.hpp"

namespace lifmap::detail {

/// Shortest decimal string that round-trips the double exactly.
inline std::string dtos(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const char* what)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw io_error(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    return v;
}

inline unsigned long long parse_uint(const std::string& s, const char* what)
{
    unsigned long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw io_error(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    return v;
}

}  // namespace lifmap::detail
