#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <Eigen/Core>

namespace ixpg {

/// Exact rational number backed by GMP.
///
/// Always canonical: reduced fraction with positive denominator. The class
/// deliberately hides gmpxx expression templates so that values can be stored
/// in Eigen containers and captured by `auto` without dangling references.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
  Rat(long num, long den);
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Parses an integer ("-3"), a fraction ("3/2") or a plain decimal ("0.125").
  /// Throws std::invalid_argument on malformed text or a zero denominator.
  static Rat parse(std::string_view text);

  /// Canonical "p/q" form; integers print without the denominator.
  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  const mpq_class& gmp() const { return v_; }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  mpq_class v_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// A rational extended with +infinity.
///
/// Used wherever the model needs an explicit "no bound" marker: the Q-value of
/// an agent with no alternative strategy, uncapacitated arcs, unbounded price
/// ratios. Infinity compares greater than every finite value.
class ExtRat {
 public:
  ExtRat() = default;
  ExtRat(Rat v) : finite_(true), v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtRat(int v) : finite_(true), v_(v) {}              // NOLINT(google-explicit-constructor)

  static ExtRat infinity() {
    ExtRat e;
    e.finite_ = false;
    return e;
  }

  bool is_finite() const { return finite_; }
  bool is_infinite() const { return !finite_; }
  /// Precondition: finite.
  const Rat& value() const;

  std::string str() const { return finite_ ? v_.str() : "inf"; }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_ || !b.finite_) {
      if (a.finite_ == b.finite_) return std::strong_ordering::equal;
      return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.v_ <=> b.v_;
  }

  /// Infinity absorbs; subtraction of infinities is not defined and never needed here.
  friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return ExtRat(a.v_ + b.v_);
  }

 private:
  bool finite_ = true;
  Rat v_;
};

std::ostream& operator<<(std::ostream& os, const ExtRat& r);

using RatMatrix = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

}  // namespace ixpg

namespace Eigen {

template <>
struct NumTraits<ixpg::Rat> : GenericNumTraits<ixpg::Rat> {
  using Real = ixpg::Rat;
  using NonInteger = ixpg::Rat;
  using Nested = ixpg::Rat;
  using Literal = ixpg::Rat;

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
