#include "asrbias/exact.hpp"

#include "asrbias/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace asrbias {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned exponent)
{
    cpp_int result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= 10;
    }
    return result;
}

[[noreturn]] void bad_number(std::string_view text)
{
    throw Error(ErrorKind::FormatError, "not a number: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string digits_with_point(const cpp_int& scaled, unsigned decimals)
{
    std::string digits = scaled.str();
    if (decimals == 0) {
        return digits;
    }
    if (digits.size() <= decimals) {
        digits.insert(0, decimals - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - decimals, 1, '.');
    return digits;
}

// cpp_int reads a leading zero as an octal prefix
cpp_int decimal_int(std::string_view digits)
{
    auto first = digits.find_first_not_of('0');
    return first == std::string_view::npos ? cpp_int(0) : cpp_int(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_exact(std::string_view text)
{
    std::string_view s = trim(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_exact(s.substr(0, slash));
        std::string_view den_text = trim(s.substr(slash + 1));
        if (!all_digits(den_text)) {
            bad_number(text);
        }
        cpp_int den = decimal_int(den_text);
        if (den == 0) {
            bad_number(text);
        }
        return num / Rational(den);
    }

    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        s = s.substr(0, e);
        const char* first = exp_text.data();
        const char* last = first + exp_text.size();
        if (!exp_text.empty() && *first == '+') {
            ++first;
        }
        auto [ptr, ec] = std::from_chars(first, last, exponent);
        if (ec != std::errc() || ptr != last || exponent > 4096 || exponent < -4096) {
            bad_number(text);
        }
    }

    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part))
        || (!frac_part.empty() && !all_digits(frac_part))) {
        bad_number(text);
    }

    cpp_int mantissa = decimal_int(std::string(int_part) + std::string(frac_part));
    exponent -= static_cast<long>(frac_part.size());
    Rational value = exponent >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(exponent)))
                                   : Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
    return negative ? Rational(-value) : value;
}

std::string to_exact_string(const Rational& value)
{
    cpp_int num = boost::multiprecision::numerator(value);
    cpp_int den = boost::multiprecision::denominator(value);
    cpp_int rest = den;
    unsigned twos = 0;
    unsigned fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) {
        return num.str() + "/" + den.str();
    }
    unsigned decimals = std::max(twos, fives);
    cpp_int scaled = num * pow10(decimals) / den;
    bool negative = scaled < 0;
    std::string text = digits_with_point(negative ? cpp_int(-scaled) : scaled, decimals);
    return negative ? "-" + text : text;
}

std::string to_fixed(const Rational& value, int decimals)
{
    if (decimals < 0) {
        throw std::invalid_argument("to_fixed: negative decimal count");
    }
    cpp_int num = boost::multiprecision::numerator(value);
    cpp_int den = boost::multiprecision::denominator(value);
    bool negative = num < 0;
    if (negative) {
        num = -num;
    }
    cpp_int scaled = (2 * num * pow10(static_cast<unsigned>(decimals)) + den) / (2 * den);
    std::string text = digits_with_point(scaled, static_cast<unsigned>(decimals));
    return negative && scaled != 0 ? "-" + text : text;
}

std::string to_fixed(double value, int decimals)
{
    if (!std::isfinite(value)) {
        throw std::invalid_argument("to_fixed: non-finite value");
    }
    return to_fixed(Rational(value), decimals);
}

double to_double(const Rational& value)
{
    return value.convert_to<double>();
}

std::string to_roundtrip_string(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        throw std::runtime_error("to_roundtrip_string: conversion failed");
    }
    return std::string(buf, ptr);
}

Rational percent(const Rational& fraction)
{
    return fraction * 100;
}

}  // namespace asrbias
