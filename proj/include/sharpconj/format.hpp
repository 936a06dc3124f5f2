#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace sharpconj::detail {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
    double out = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument(what + ": expected a number, got '" + std::string(s) + "'");
    return out;
}

}  // namespace sharpconj::detail
