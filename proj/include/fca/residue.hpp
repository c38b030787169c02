#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fca {

/// The coefficient ring Z_{p^l}: integers modulo a prime power.
/// Elements are plain uint64_t values in [0, p^l).
struct ResidueRing {
    uint64_t p = 2;
    uint32_t l = 1;
    uint64_t modulus = 2;

    ResidueRing() = default;

    ResidueRing(uint64_t prime, uint32_t exponent) : p(prime), l(exponent) {
        if (l < 1) throw std::invalid_argument("ResidueRing: exponent must be >= 1");
        if (!is_prime(p)) throw std::invalid_argument("ResidueRing: " + std::to_string(p) + " is not prime");
        modulus = 1;
        for (uint32_t i = 0; i < l; ++i) {
            if (modulus > (uint64_t(1) << 32) / p)
                throw std::invalid_argument("ResidueRing: modulus p^l too large");
            modulus *= p;
        }
    }

    static bool is_prime(uint64_t n) {
        if (n < 2) return false;
        for (uint64_t q = 2; q * q <= n; ++q)
            if (n % q == 0) return false;
        return true;
    }

    uint64_t reduce(int64_t v) const {
        int64_t m = static_cast<int64_t>(modulus);
        int64_t r = v % m;
        if (r < 0) r += m;
        return static_cast<uint64_t>(r);
    }

    uint64_t add(uint64_t a, uint64_t b) const { return (a + b) % modulus; }
    uint64_t sub(uint64_t a, uint64_t b) const { return (a + modulus - b % modulus) % modulus; }
    uint64_t mul(uint64_t a, uint64_t b) const { return (a * b) % modulus; }
    uint64_t neg(uint64_t a) const { return a % modulus == 0 ? 0 : modulus - a % modulus; }

    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1 % modulus, b = a % modulus;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    bool operator==(const ResidueRing& o) const { return p == o.p && l == o.l; }
    bool operator!=(const ResidueRing& o) const { return !(*this == o); }

    std::string to_string() const { return "Z" + std::to_string(p) + "^" + std::to_string(l); }
};

}  // namespace fca
