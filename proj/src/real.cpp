#include "jacobi/real.hpp"

#include <charconv>
#include <ios>
#include <string>
#include <system_error>

#include "jacobi/error.hpp"

namespace jacobi {
namespace {

std::string_view strip_plus(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    return text;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
}

std::string shortest_double(double x) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    return std::string(buffer, end);
}

}  // namespace

template <>
double parse_real<double>(std::string_view text) {
    const std::string_view body = strip_plus(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc{} || end != body.data() + body.size()) bad_number(text);
    return value;
}

template <>
Extended parse_real<Extended>(std::string_view text) {
    const std::string body(strip_plus(text));
    if (body.empty()) bad_number(text);
    Extended value;
    char* end = nullptr;
    mpfr_strtofr(value.backend().data(), body.c_str(), &end, 10, MPFR_RNDN);
    if (end != body.c_str() + body.size()) bad_number(text);
    return value;
}

template <>
std::string format_real<double>(const double& x) {
    return shortest_double(x);
}

template <>
std::string format_real<Extended>(const Extended& x) {
    // The short form is only used when it reads back as the same Extended.
    const double nearest = static_cast<double>(x);
    if (Extended(nearest) == x) {
        std::string brief = shortest_double(nearest);
        if (parse_real<Extended>(brief) == x) return brief;
    }
    return x.str(std::numeric_limits<Extended>::max_digits10, std::ios_base::scientific);
}

std::string_view precision_name(const double*) { return "double"; }
std::string_view precision_name(const Extended*) { return "extended"; }

}  // namespace jacobi
