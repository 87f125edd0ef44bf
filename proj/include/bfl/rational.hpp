#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bfl {

// Exact rational, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int64_t n) : v_(static_cast<long>(n)) {}
  Rational(int n) : v_(n) {}
  Rational(int64_t num, int64_t den) : v_(static_cast<long>(num), static_cast<long>(den)) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(mpq_class(s));
    mpq_class q(s);
    if (q.get_den() == 0) throw std::invalid_argument("Rational: zero denominator");
    return Rational(q);
  }

  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.v_ == 0) throw std::invalid_argument("Rational: division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  // Narrow accessors guard the wire format: payloads carry 64-bit num/den.
  int64_t num_i64() const {
    if (!v_.get_num().fits_slong_p()) throw std::overflow_error("Rational numerator exceeds 64 bits");
    return static_cast<int64_t>(v_.get_num().get_si());
  }
  int64_t den_i64() const {
    if (!v_.get_den().fits_slong_p()) throw std::overflow_error("Rational denominator exceeds 64 bits");
    return static_cast<int64_t>(v_.get_den().get_si());
  }

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

inline Rational operator+(int64_t a, const Rational& b) { return Rational(a) + b; }
inline Rational operator-(int64_t a, const Rational& b) { return Rational(a) - b; }
inline Rational operator*(int64_t a, const Rational& b) { return Rational(a) * b; }

}  // namespace bfl
