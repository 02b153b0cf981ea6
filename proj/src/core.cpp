#include "nonloc/core.hpp"

namespace nonloc {

std::string to_fraction_string(const Rational& value)
{
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Integer parse_integer(const std::string& text)
{
    Integer out;
    std::string body = text;
    if (!body.empty() && body.front() == '+') body.erase(0, 1);
    if (body.empty() || out.set_str(body, 10) != 0) throw InputError("not an integer: '" + text + "'");
    return out;
}

Rational parse_fraction(const std::string& text)
{
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator: '" + text + "'");
    Rational out(num, den);
    out.canonicalize();
    return out;
}

} // namespace nonloc
