#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mathcamps {

/// How a rational is rendered. The value is always exact; the form only
/// affects printing.
enum class NumberForm { integer, fraction, decimal };

inline const char* to_string(NumberForm form) {
  switch (form) {
    case NumberForm::integer: return "integer";
    case NumberForm::fraction: return "fraction";
    case NumberForm::decimal: return "decimal";
  }
  return "integer";
}

inline std::optional<NumberForm> number_form_from_string(std::string_view s) {
  if (s == "integer") return NumberForm::integer;
  if (s == "fraction") return NumberForm::fraction;
  if (s == "decimal") return NumberForm::decimal;
  return std::nullopt;
}

/// True when the denominator has no prime factors besides 2 and 5.
inline bool has_finite_decimal(const mpq_class& q) {
  mpz_class d = q.get_den();
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
  return d == 1;
}

/// Arbitrary-precision rational in lowest terms plus a display form.
///
/// The form is normalized on construction: a value with denominator 1 is
/// always `integer`, and `decimal` is demoted to `fraction` when the value has
/// no finite decimal expansion.
class ExactNumber {
 public:
  ExactNumber() : value_(0), form_(NumberForm::integer) {}
  ExactNumber(long v) : value_(v), form_(NumberForm::integer) {}  // NOLINT(google-explicit-constructor)
  explicit ExactNumber(mpq_class v, NumberForm form = NumberForm::fraction)
      : value_(std::move(v)), form_(form) {
    value_.canonicalize();
    normalize_form();
  }
  ExactNumber(const mpz_class& num, const mpz_class& den, NumberForm form = NumberForm::fraction)
      : ExactNumber(mpq_class(num, den), form) {}

  /// Parses `12`, `-12`, `3/4`, `-3/4`, `0.25`, `-1.5`. Returns nullopt on
  /// anything else (including a zero denominator).
  static std::optional<ExactNumber> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-') {
      negative = true;
      i = 1;
    }
    std::string_view body = text.substr(i);
    if (body.empty()) return std::nullopt;
    auto all_digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    mpq_class value;
    NumberForm form = NumberForm::integer;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
      auto num = body.substr(0, slash);
      auto den = body.substr(slash + 1);
      if (!all_digits(num) || !all_digits(den)) return std::nullopt;
      mpz_class d(std::string(den), 10);
      if (d == 0) return std::nullopt;
      value = mpq_class(mpz_class(std::string(num), 10), d);
      form = NumberForm::fraction;
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
      auto whole = body.substr(0, dot);
      auto frac = body.substr(dot + 1);
      if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      value = mpq_class(mpz_class(std::string(whole) + std::string(frac), 10), scale);
      form = NumberForm::decimal;
    } else {
      if (!all_digits(body)) return std::nullopt;
      value = mpq_class(mpz_class(std::string(body), 10));
    }
    value.canonicalize();
    if (negative) value = -value;
    return ExactNumber(value, form);
  }

  const mpq_class& value() const noexcept { return value_; }
  NumberForm form() const noexcept { return form_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_integer() const { return value_.get_den() == 1; }
  bool is_negative() const { return sgn(value_) < 0; }
  bool is_zero() const { return sgn(value_) == 0; }
  bool has_finite_decimal() const { return mathcamps::has_finite_decimal(value_); }

  /// Same value with a different display form (normalized).
  ExactNumber with_form(NumberForm form) const { return ExactNumber(value_, form); }

  /// Canonical rendering for the DSL: `12`, `-3/4`, `0.25`.
  std::string to_string() const {
    switch (form_) {
      case NumberForm::integer: return value_.get_num().get_str();
      case NumberForm::fraction:
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
      case NumberForm::decimal: return decimal_string();
    }
    return value_.get_str();
  }

  /// `num/den` regardless of form (denominator 1 included).
  std::string to_num_den() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  double to_double() const { return value_.get_d(); }

  /// Structural equality: value and form.
  friend bool operator==(const ExactNumber& a, const ExactNumber& b) {
    return a.form_ == b.form_ && a.value_ == b.value_;
  }

  /// Value-only comparison.
  friend bool same_value(const ExactNumber& a, const ExactNumber& b) { return a.value_ == b.value_; }

 private:
  void normalize_form() {
    if (value_.get_den() == 1) {
      form_ = NumberForm::integer;
    } else if (form_ == NumberForm::integer) {
      form_ = NumberForm::fraction;
    } else if (form_ == NumberForm::decimal && !mathcamps::has_finite_decimal(value_)) {
      form_ = NumberForm::fraction;
    }
  }

  std::string decimal_string() const {
    mpz_class den = value_.get_den();
    unsigned twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
      den /= 2;
      ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
      den /= 5;
      ++fives;
    }
    unsigned places = twos > fives ? twos : fives;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = value_.get_num() * scale / value_.get_den();
    bool negative = sgn(scaled) < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return negative ? "-" + digits : digits;
  }

  mpq_class value_;
  NumberForm form_;
};

inline std::strong_ordering compare_exact(const ExactNumber& a, const ExactNumber& b) {
  int c = cmp(a.value(), b.value());
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace detail {

inline NumberForm combined_form(const ExactNumber& a, const ExactNumber& b) {
  if (a.form() == NumberForm::fraction || b.form() == NumberForm::fraction) return NumberForm::fraction;
  if (a.form() == NumberForm::decimal || b.form() == NumberForm::decimal) return NumberForm::decimal;
  return NumberForm::fraction;  // integer op integer; integral results normalize back
}

}  // namespace detail

inline ExactNumber operator+(const ExactNumber& a, const ExactNumber& b) {
  return ExactNumber(a.value() + b.value(), detail::combined_form(a, b));
}
inline ExactNumber operator-(const ExactNumber& a, const ExactNumber& b) {
  return ExactNumber(a.value() - b.value(), detail::combined_form(a, b));
}
inline ExactNumber operator*(const ExactNumber& a, const ExactNumber& b) {
  return ExactNumber(a.value() * b.value(), detail::combined_form(a, b));
}
/// Caller guarantees b != 0.
inline ExactNumber operator/(const ExactNumber& a, const ExactNumber& b) {
  return ExactNumber(a.value() / b.value(), detail::combined_form(a, b));
}
inline ExactNumber operator-(const ExactNumber& a) { return ExactNumber(-a.value(), a.form()); }

}  // namespace mathcamps
