#include "edif/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "edif/error.hpp"

namespace edif {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EqualWithinDepth: return "EqualWithinDepth";
    case ErrorKind::InsufficientDepth: return "InsufficientDepth";
    case ErrorKind::DepthExhausted: return "DepthExhausted";
    case ErrorKind::ScheduleViolation: return "ScheduleViolation";
    case ErrorKind::NotInTree: return "NotInTree";
    case ErrorKind::SameLeaf: return "SameLeaf";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::NegativeValueDetected: return "NegativeValueDetected";
    case ErrorKind::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorKind::CrossingIsolationFailure: return "CrossingIsolationFailure";
    case ErrorKind::StageNotFound: return "StageNotFound";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::MassOutOfRange: return "MassOutOfRange";
    case ErrorKind::PinnedPointConflict: return "PinnedPointConflict";
    case ErrorKind::NotClose: return "NotClose";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::NoAdmissiblePoint: return "NoAdmissiblePoint";
    case ErrorKind::HeightConflict: return "HeightConflict";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty rational");
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator: " + s);
      q.canonicalize();
      return q;
    }
    // Decimal with optional exponent, parsed exactly.
    std::size_t epos = s.find_first_of("eE");
    long exponent = 0;
    std::string mant = s;
    if (epos != std::string::npos) {
      exponent = std::stol(s.substr(epos + 1));
      mant = s.substr(0, epos);
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      exponent -= static_cast<long>(mant.size() - dot - 1);
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::InvalidInput, "malformed rational: " + s);
    BigInt n(digits, 10);
    Rational q(n);
    if (exponent > 0) q *= Rational(ipow(10, static_cast<unsigned long>(exponent)));
    if (exponent < 0) q /= Rational(ipow(10, static_cast<unsigned long>(-exponent)));
    if (neg) q = -q;
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::InvalidInput, "malformed rational: " + s);
  } catch (const std::out_of_range&) {
    throw Error(ErrorKind::InvalidInput, "exponent out of range: " + s);
  }
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite double");
  Rational q(x);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) {
  // mpq_get_d truncates; refine to nearest with one correction step.
  double d = q.get_d();
  if (d == 0.0 && sign(q) == 0) return 0.0;
  double up = std::nextafter(d, sign(q) > 0 ? INFINITY : -INFINITY);
  Rational err_d = abs(q - from_double(d));
  Rational err_u = abs(q - from_double(up));
  return err_u < err_d ? up : d;
}

Rational pow2(long k) {
  BigInt p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(k >= 0 ? k : -k));
  if (k >= 0) return Rational(p);
  Rational q(BigInt(1), p);
  q.canonicalize();
  return q;
}

BigInt ipow(long base, unsigned long k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), k);
  if (base < 0 && (k % 2 == 1)) r = -r;
  return r;
}

int sign(const Rational& q) { return sgn(q); }

long floor_log2(const Rational& q) {
  if (sgn(q) <= 0) throw Error(ErrorKind::InvalidInput, "floor_log2 of non-positive");
  long nb = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  long db = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  long k = nb - db;  // 2^(k-1) < q < 2^(k+1)
  while (pow2(k) > q) --k;
  while (pow2(k + 1) <= q) ++k;
  return k;
}

}  // namespace edif
