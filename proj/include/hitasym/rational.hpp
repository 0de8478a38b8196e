#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hitasym {

/// Exact fraction of arbitrary-precision integers, always in lowest terms
/// with a positive denominator.
class Rational {
  public:
    Rational() = default;
    Rational(long v) : value_(v) {}                    // NOLINT(google-explicit-constructor)
    Rational(int v) : value_(v) {}                     // NOLINT(google-explicit-constructor)
    Rational(unsigned long v) : value_(v) {}           // NOLINT(google-explicit-constructor)
    Rational(unsigned int v) : value_(v) {}            // NOLINT(google-explicit-constructor)
    Rational(long long v) : Rational(mpz_class(std::to_string(v))) {}
    Rational(unsigned long long v) : Rational(mpz_class(std::to_string(v))) {}
    explicit Rational(const mpz_class& v) : value_(v) {}
    explicit Rational(const mpq_class& v) : value_(v) { value_.canonicalize(); }

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }
    Rational(std::int64_t num, std::uint64_t den)
        : Rational(mpz_class(std::to_string(num)), mpz_class(std::to_string(den))) {}

    /// Parses "p/q", "p", or a plain decimal like "-0.125". The result is
    /// normalized, so "10/54" and "5/27" compare equal and print the same.
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        auto digits_ok = [](std::string_view d, bool allow_sign) {
            if (allow_sign && !d.empty() && d.front() == '-') d.remove_prefix(1);
            if (d.empty()) return false;
            for (char c : d)
                if (c < '0' || c > '9') return false;
            return true;
        };
        if (auto slash = s.find('/'); slash != std::string::npos) {
            auto num = s.substr(0, slash);
            auto den = s.substr(slash + 1);
            if (!digits_ok(num, true) || !digits_ok(den, false))
                throw std::invalid_argument("Rational: malformed fraction '" + s + "'");
            if (mpz_class(den) == 0) throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
            return Rational(mpz_class(num), mpz_class(den));
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            auto whole = s.substr(0, dot);
            auto frac = s.substr(dot + 1);
            bool neg = !whole.empty() && whole.front() == '-';
            if (neg) whole.erase(0, 1);
            if (whole.empty()) whole = "0";
            if (!digits_ok(whole, false) || !digits_ok(frac, false))
                throw std::invalid_argument("Rational: malformed decimal '" + s + "'");
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
            mpz_class num = mpz_class(whole) * scale + mpz_class(frac);
            return Rational(neg ? mpz_class(-num) : num, scale);
        }
        if (!digits_ok(s, true)) throw std::invalid_argument("Rational: malformed integer '" + s + "'");
        return Rational(mpz_class(s));
    }

    /// Canonical "p/q" text; integers print with denominator 1.
    [[nodiscard]] std::string str() const {
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    [[nodiscard]] double to_double() const { return value_.get_d(); }
    [[nodiscard]] mpz_class num() const { return value_.get_num(); }
    [[nodiscard]] mpz_class den() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }

    /// Largest integer ≤ this.
    [[nodiscard]] mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r;
    }
    /// Smallest integer ≥ this.
    [[nodiscard]] mpz_class ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r;
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.value_ == 0) throw std::domain_error("Rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

  private:
    mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Converts a nonnegative big integer that must fit a machine word.
inline std::uint64_t to_u64(const mpz_class& z) {
    if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64)
        throw std::overflow_error("integer " + z.get_str() + " does not fit in 64 bits");
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
    return out;
}

inline mpz_class from_u64(std::uint64_t v) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return z;
}

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
    return Rational(from_u64(num), from_u64(den));
}

} // namespace hitasym

template <>
struct std::hash<hitasym::Rational> {
    std::size_t operator()(const hitasym::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
