#include "rlam/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace rlam {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

Rational pow10(long e)
{
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

std::optional<Rational> parse_decimal(std::string_view text)
{
    std::size_t exp_pos = text.find_first_of("eE");
    std::string_view mantissa = text.substr(0, exp_pos);
    long exponent = 0;
    if (exp_pos != std::string_view::npos) {
        std::string_view e = text.substr(exp_pos + 1);
        bool neg = false;
        if (!e.empty() && (e[0] == '+' || e[0] == '-')) {
            neg = e[0] == '-';
            e.remove_prefix(1);
        }
        if (!all_digits(e) || e.size() > 6)
            return std::nullopt;
        exponent = std::stol(std::string(e));
        if (neg)
            exponent = -exponent;
    }
    std::size_t dot = mantissa.find('.');
    std::string_view int_part = mantissa.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : mantissa.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
        return std::nullopt;
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
        return std::nullopt;
    std::string digits = std::string(int_part) + std::string(frac_part);
    Rational value(mpz_class(digits, 10));
    value *= pow10(exponent - static_cast<long>(frac_part.size()));
    value.canonicalize();
    return value;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
        negative = text[0] == '-';
        text.remove_prefix(1);
    }
    std::optional<Rational> value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = parse_decimal(text.substr(0, slash));
        auto den = parse_decimal(text.substr(slash + 1));
        if (!num || !den || *den == 0)
            return std::nullopt;
        value = Rational(*num / *den);
    } else {
        value = parse_decimal(text);
    }
    if (value && negative)
        *value = -*value;
    return value;
}

std::string format_rational(const Rational& value)
{
    Rational q = value;
    q.canonicalize();
    mpz_class den = q.get_den();
    unsigned long twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1)
        return q.get_num().get_str() + "/" + q.get_den().get_str();

    unsigned long places = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = q.get_num() * scale / q.get_den();
    bool negative = scaled < 0;
    std::string digits = mpz_class(abs(scaled)).get_str();
    if (digits.size() <= places)
        digits.insert(0, places + 1 - digits.size(), '0');
    std::string int_part = digits.substr(0, digits.size() - places);
    std::string frac_part = places == 0 ? "0" : digits.substr(digits.size() - places);
    return (negative ? "-" : "") + int_part + "." + frac_part;
}

double to_double(const Rational& q)
{
    return q.get_d();
}

Rational from_double(double d)
{
    if (!std::isfinite(d))
        throw std::domain_error("cannot represent a non-finite double as a rational");
    Rational q(d);
    q.canonicalize();
    return q;
}

} // namespace rlam
