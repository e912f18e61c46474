#include "statsim/rational.hpp"

#include <cctype>

namespace statsim {

std::optional<Rational> parse_rational(std::string_view text) {
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t num_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_start) return std::nullopt;
    if (i < text.size()) {
        if (text[i] != '/') return std::nullopt;
        ++i;
        std::size_t den_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_start || i != text.size()) return std::nullopt;
        if (std::string_view den = text.substr(den_start);
            den.find_first_not_of('0') == std::string_view::npos)
            return std::nullopt;  // zero denominator
    }
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), std::string(text).c_str(), 10) != 0) return std::nullopt;
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace statsim
