// Exact rational scalars for field data (breakpoints, force values) and the
// arithmetic existence conditions. Geometry stays in double; the split keeps
// the feasibility checks exact while the solvers run at native precision.
#ifndef RINGEQ_RATIONAL_HPP
#define RINGEQ_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ringeq {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) /
           static_cast<double>(r.denominator());
}

// Accepts "p/q", plain integers, and finite decimal strings ("0.25" = 1/4).
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto parse_int = [](const std::string& t) -> long long {
        std::size_t pos = 0;
        long long v = std::stoll(t, &pos);
        if (pos != t.size())
            throw std::invalid_argument("bad integer in rational literal: '" + t + "'");
        return v;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        long long num = parse_int(s.substr(0, slash));
        long long den = parse_int(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (frac.empty())
            return Rational(parse_int(head.empty() ? "0" : head), 1);
        if (frac.size() > 15)
            throw std::invalid_argument("decimal literal too long: '" + s + "'");
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        bool neg = !head.empty() && head[0] == '-';
        std::string hd = (head.empty() || head == "-" || head == "+") ? "0" : head;
        long long whole = parse_int(hd);
        long long fpart = parse_int(frac);
        long long num = (neg ? -1 : 1) * ((neg ? -whole : whole) * den + fpart);
        return Rational(num, den);
    }
    return Rational(parse_int(s), 1);
}

inline std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace ringeq

#endif
