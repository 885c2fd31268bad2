#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mpss {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct contract_error : std::logic_error {
    explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

// Coefficient rings. Algorithms are templated on one of RingZ, RingQ, RingFp;
// an instance is passed around so that RingFp can carry its modulus.

struct RingZ {
    static constexpr bool is_field = false;
    using Elem = Int;

    std::string name() const { return "Z"; }
    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long long v) const { return Elem(v); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }

    // Quotient rounded to nearest, so remainders satisfy |r| <= |b|/2.
    Elem quot_round(const Elem& a, const Elem& b) const {
        Elem q = a / b;
        Elem r = a - q * b;
        if (r != 0) {
            Elem b2 = abs(b);
            if (2 * abs(r) > b2) q += (((r < 0) == (b < 0)) ? 1 : -1);
        }
        return q;
    }
    Elem quot_floor(const Elem& a, const Elem& b) const {
        Elem q = a / b;
        if (q * b != a && ((a < 0) != (b < 0))) --q;
        return q;
    }
    bool divides(const Elem& a, const Elem& b) const { return a != 0 && b % a == 0; }
    Elem exact_div(const Elem& a, const Elem& b) const {
        if (b == 0 || a % b != 0) throw contract_error("exact_div: not divisible");
        return a / b;
    }
    std::string to_string(const Elem& a) const { return a.str(); }
};

struct RingQ {
    static constexpr bool is_field = true;
    using Elem = Rat;

    std::string name() const { return "Q"; }
    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long long v) const { return Elem(v); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw contract_error("inv(0)");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return a / inv_check(b); }
    std::string to_string(const Elem& a) const { return a.str(); }

private:
    const Elem& inv_check(const Elem& b) const {
        if (b == 0) throw contract_error("division by zero");
        return b;
    }
};

struct RingFp {
    static constexpr bool is_field = true;
    using Elem = std::uint64_t;

    std::uint64_t p = 2;

    RingFp() = default;
    explicit RingFp(std::uint64_t prime) : p(prime) {
        if (p < 2 || p > (1ull << 31)) throw input_error("Fp modulus out of range");
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw input_error("Fp modulus must be prime");
    }

    std::string name() const { return "F" + std::to_string(p); }
    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        return static_cast<Elem>(m);
    }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw contract_error("inv(0)");
        // Fermat: p is prime.
        Elem r = 1, base = a;
        std::uint64_t e = p - 2;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    std::string to_string(Elem a) const { return std::to_string(a); }
};

}  // namespace mpss
