#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace qpg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational m / 2^e. Canonical form: e == 0 or m odd.
/// The only scalar in the system; all arithmetic is exact and division
/// is restricted to powers of two.
class Dyadic {
 public:
  Dyadic() : m_(0), e_(0) {}
  Dyadic(long long n) : m_(n), e_(0) {}          // NOLINT: implicit by design
  explicit Dyadic(BigInt n) : m_(std::move(n)), e_(0) {}
  Dyadic(BigInt m, long e) : m_(std::move(m)), e_(e) {
    if (e < 0) throw std::invalid_argument("Dyadic: negative exponent");
    canonicalize();
  }

  const BigInt& mantissa() const { return m_; }
  long exponent() const { return e_; }

  bool isZero() const { return m_ == 0; }
  bool isInteger() const { return e_ == 0; }
  bool isHalfInteger() const { return e_ <= 1; }

  /// Position doubled (2x), defined for half-integers only.
  BigInt doubled() const {
    if (e_ > 1) throw std::domain_error("Dyadic: not a half-integer");
    return e_ == 0 ? m_ * 2 : m_;
  }

  BigInt floorInt() const {
    if (e_ == 0) return m_;
    BigInt d = BigInt(1) << e_;
    BigInt q = m_ / d;
    if (m_ % d != 0 && m_ < 0) --q;
    return q;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    long e = std::max(a.e_, b.e_);
    return Dyadic((a.m_ << (e - a.e_)) + (b.m_ << (e - b.e_)), e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    long e = std::max(a.e_, b.e_);
    return Dyadic((a.m_ << (e - a.e_)) - (b.m_ << (e - b.e_)), e);
  }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.m_ * b.m_, a.e_ + b.e_);
  }
  Dyadic operator-() const {
    Dyadic r;
    r.m_ = -m_;
    r.e_ = e_;
    return r;
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  /// Multiply by 2^j (j may be negative).
  Dyadic mulPow2(long j) const {
    if (j >= 0) return Dyadic(m_ << j, e_);
    return Dyadic(m_, e_ - j);
  }
  Dyadic half() const { return mulPow2(-1); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.e_ == b.e_ && a.m_ == b.m_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    long e = std::max(a.e_, b.e_);
    return (a.m_ << (e - a.e_)) < (b.m_ << (e - b.e_));
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }

  int sign() const { return m_ == 0 ? 0 : (m_ < 0 ? -1 : 1); }

  /// Odd part and 2-adic valuation: value = odd * 2^val2, odd odd (0 -> (0,0)).
  std::pair<BigInt, long> oddSplit() const {
    if (m_ == 0) return {BigInt(0), 0};
    BigInt u = m_;
    long v = -e_;
    while ((u & 1) == 0) {
      u >>= 1;
      ++v;
    }
    return {u, v};
  }

  /// "m" when integral, "m/2^e" denominator spelled out otherwise.
  std::string str() const {
    if (e_ == 0) return m_.str();
    return m_.str() + "/" + (BigInt(1) << e_).str();
  }

  /// Parses "m" or "m/d" with d a positive power of two.
  static Dyadic parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Dyadic(BigInt(s), 0);
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den <= 0) throw std::invalid_argument("");
      long e = 0;
      while ((den & 1) == 0) {
        den >>= 1;
        ++e;
      }
      if (den != 1)
        throw std::invalid_argument("Dyadic: denominator not a power of 2: " + s);
      return Dyadic(num, e);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("Dyadic: cannot parse '" + s + "'");
    }
  }

 private:
  void canonicalize() {
    if (m_ == 0) {
      e_ = 0;
      return;
    }
    while (e_ > 0 && (m_ & 1) == 0) {
      m_ >>= 1;
      --e_;
    }
  }

  BigInt m_;
  long e_;
};

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

/// Exact quotient a / d for odd integer d, when the result is again dyadic.
inline std::optional<Dyadic> divideByOdd(const Dyadic& a, const BigInt& d) {
  if (d == 0) throw std::invalid_argument("divideByOdd: zero divisor");
  if (a.mantissa() % d != 0) return std::nullopt;
  return Dyadic(a.mantissa() / d, a.exponent());
}

/// The unitwise reflection x -> 2*floor(x) + 1 - x.
inline Dyadic iota(const Dyadic& x) {
  return Dyadic(x.floorInt() * 2 + 1, 0) - x;
}

}  // namespace qpg
