#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace homog {

/// Exact rational number backed by GMP, kept canonical (reduced, positive
/// denominator). All arithmetic in the library goes through this type; there
/// is no floating point anywhere.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design, 2 means 2/1
  Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Accepts "p", "-p", "p/q".
  static Rat parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat: empty string");
    for (char c : s) {
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
        throw std::invalid_argument("Rat: bad character in '" + s + "'");
    }
    mpq_class v;
    if (v.set_str(s, 10) != 0) throw std::invalid_argument("Rat: unparsable '" + s + "'");
    if (v.get_den() == 0) throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
    v.canonicalize();
    return Rat(std::move(v));
  }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  int cmp(const Rat& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()); }
  int sign() const { return mpq_sgn(v_.get_mpq_t()); }
  bool is_zero() const { return sign() == 0; }
  mpq_srcptr raw() const { return v_.get_mpq_t(); }

  friend Rat operator+(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ + y.v_)); }
  friend Rat operator-(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ - y.v_)); }
  friend Rat operator*(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ * y.v_)); }
  friend Rat operator/(const Rat& x, const Rat& y) {
    if (y.is_zero()) throw std::invalid_argument("Rat: division by zero");
    return Rat(mpq_class(x.v_ / y.v_));
  }
  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat half() const { return Rat(mpq_class(v_ / 2)); }

  friend bool operator==(const Rat& x, const Rat& y) { return x.cmp(y) == 0; }
  friend bool operator!=(const Rat& x, const Rat& y) { return x.cmp(y) != 0; }
  friend bool operator<(const Rat& x, const Rat& y) { return x.cmp(y) < 0; }
  friend bool operator<=(const Rat& x, const Rat& y) { return x.cmp(y) <= 0; }
  friend bool operator>(const Rat& x, const Rat& y) { return x.cmp(y) > 0; }
  friend bool operator>=(const Rat& x, const Rat& y) { return x.cmp(y) >= 0; }

  std::size_t hash() const {
    // Cheap structural hash; collisions are fine, equality is exact.
    std::size_t h = mpz_get_ui(v_.get_num().get_mpz_t());
    h = h * 1000003u ^ mpz_get_ui(v_.get_den().get_mpz_t());
    if (sign() < 0) h = ~h;
    return h;
  }

 private:
  mpq_class v_;
};

inline Rat min(const Rat& x, const Rat& y) { return x <= y ? x : y; }
inline Rat max(const Rat& x, const Rat& y) { return x >= y ? x : y; }

}  // namespace homog
