#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace tok {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structural identity that must hold by construction has failed
/// (CLI exit code 3). Never thrown for bad user data.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline std::string to_string(const Integer& v) { return v.str(); }

inline std::string to_string(const Rational& v)
{
    if (boost::multiprecision::denominator(v) == 1)
        return boost::multiprecision::numerator(v).str();
    return boost::multiprecision::numerator(v).str() + "/" +
           boost::multiprecision::denominator(v).str();
}

inline Rational parse_rational(const std::string& text)
{
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(Integer(text));
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("not a rational number: '" + text + "'");
    }
}

// Coefficient-ring traits used by the generic complex code.
inline bool is_unit(const Integer& v) { return v == 1 || v == -1; }
inline bool is_unit(const Rational& v) { return v != 0; }
inline Integer unit_inverse(const Integer& v) { return v; }
inline Rational unit_inverse(const Rational& v) { return Rational(1) / v; }

}  // namespace tok
