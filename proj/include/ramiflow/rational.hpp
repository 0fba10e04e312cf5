#ifndef RAMIFLOW_RATIONAL_HPP
#define RAMIFLOW_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace ramiflow {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy shared by all modules. Codes map onto CLI exit statuses.
struct Error : std::runtime_error {
    enum class Code {
        ZeroInput,
        InsufficientPrecision,
        NonComputableResidue,
        NotInvertible,
        OutOfDomain,
        DomainMismatch,
        UnboundedSupport,
        NonClassFunction,
        NotNormal,
        GroupMismatch,
        DegenerateOrbit,
        UnsupportedCover,
        NormalizationFailed,
        ResidueFieldTooSmall,
        NotTypeII,
        NotIntegral,
        NotInSKL,
        BadCharacteristic,
        CheckFailed,
        ParseError,
    };
    Code code;
    Error(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline Error err(Error::Code c, const std::string& what) { return Error(c, what); }

inline Rat rat(long n, long d = 1) { return Rat(Int(n), Int(d)); }

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int rat_floor(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }
inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// r = a/b with b | m ?
inline bool denominator_divides(const Rat& r, const Int& m) {
    return m % rat_den(r) == 0;
}

inline long to_long(const Int& v) {
    if (v > Int(std::numeric_limits<long>::max()) || v < Int(std::numeric_limits<long>::min()))
        throw err(Error::Code::ParseError, "integer out of machine range");
    return static_cast<long>(v);
}

inline std::string rat_str(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

inline long mod_pow(long base, long exp, long mod) {
    long r = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) r = (r * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return r;
}

}  // namespace ramiflow

#endif
