#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace ballotcraft {

// Arbitrary-precision rational. Expression templates are off so that `auto`
// and mixed comparisons behave like plain value types.
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

// Stable error codes; the CLI maps these to exit codes.
enum class Errc {
  InvalidInterval,
  BadWeights,
  DegenerateSize,
  CapExceeded,
  InvalidThresholds,
  EmptyCollection,
  EmptyVertexSet,
  EnumerationOverflow,
  NotRegular,
  InvalidBallots,
  InternalInconsistency,
  RequiresAnonymity,
  CrdViolated,
  PerCapitaRequired,
  TerminalCase,
  PreconditionFailed,
  BudgetExceeded,
  MalformedInput,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidInterval: return "InvalidInterval";
    case Errc::BadWeights: return "BadWeights";
    case Errc::DegenerateSize: return "DegenerateSize";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::InvalidThresholds: return "InvalidThresholds";
    case Errc::EmptyCollection: return "EmptyCollection";
    case Errc::EmptyVertexSet: return "EmptyVertexSet";
    case Errc::EnumerationOverflow: return "EnumerationOverflow";
    case Errc::NotRegular: return "NotRegular";
    case Errc::InvalidBallots: return "InvalidBallots";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::RequiresAnonymity: return "RequiresAnonymity";
    case Errc::CrdViolated: return "CrdViolated";
    case Errc::PerCapitaRequired: return "PerCapitaRequired";
    case Errc::TerminalCase: return "TerminalCase";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::MalformedInput: return "MalformedInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// "p/q", plain integers, and exact decimals ("0.25" -> 1/4) are accepted.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) fail(Errc::MalformedInput, "empty rational literal");
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  auto digits = [&](BigInt& out) {
    std::size_t start = i;
    out = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      out = out * 10 + (s[i] - '0');
      ++i;
    }
    return i > start;
  };
  BigInt num;
  if (!digits(num)) fail(Errc::MalformedInput, "bad rational literal '" + s + "'");
  BigInt den = 1;
  if (i < s.size() && s[i] == '/') {
    ++i;
    if (!digits(den) || den == 0 || i != s.size())
      fail(Errc::MalformedInput, "bad rational literal '" + s + "'");
  } else if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
      num = num * 10 + (s[i] - '0');
      den *= 10;
      ++i;
    }
    if (i == start || i != s.size())
      fail(Errc::MalformedInput, "bad rational literal '" + s + "'");
  } else if (i != s.size()) {
    fail(Errc::MalformedInput, "bad rational literal '" + s + "'");
  }
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

// "p/q", or "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) { return r.str(); }

inline double rat_approx(const Rat& r) { return r.template convert_to<double>(); }

}  // namespace ballotcraft
