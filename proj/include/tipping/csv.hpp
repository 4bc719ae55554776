#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace tipping::csv {

// Shortest decimal text that round-trips to the same double.
inline std::string number(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, end);
}

inline std::string number(const std::optional<double>& x) {
    return x ? number(*x) : std::string("undefined");
}

template <typename... Cells>
void row(std::ostream& out, const Cells&... cells) {
    bool first = true;
    auto put = [&](const auto& cell) {
        if (!first) out << ',';
        first = false;
        if constexpr (std::is_arithmetic_v<std::decay_t<decltype(cell)>> &&
                      !std::is_integral_v<std::decay_t<decltype(cell)>>)
            out << number(cell);
        else if constexpr (std::is_same_v<std::decay_t<decltype(cell)>, std::optional<double>>)
            out << number(cell);
        else
            out << cell;
    };
    (put(cells), ...);
    out << '\n';
}

} // namespace tipping::csv
