#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "ecml/error.hpp"

namespace ecml {

// Element of the finite monoid {0, ..., N+k-1} attached to an UPSet.
struct MonoidElement {
  int value = 0;
  friend auto operator<=>(const MonoidElement&, const MonoidElement&) = default;
};

// Ultimately periodic subset of the naturals: n ∈ S iff bit(n) for n < N+k,
// and membership repeats with period k from N on. Always kept canonical.
class UPSet {
 public:
  UPSet() : UPSet(0, 1, {false}) {}

  UPSet(int threshold, int period, std::vector<bool> bits) : threshold_(threshold), period_(period), bits_(std::move(bits)) {
    if (period_ < 1) throw Error("period must be positive");
    if (threshold_ < 0) throw Error("threshold must be nonnegative");
    if (static_cast<int>(bits_.size()) != threshold_ + period_) throw Error("membership vector must have length N+k");
  }

  int threshold() const { return threshold_; }
  int period() const { return period_; }
  const std::vector<bool>& bits() const { return bits_; }
  int carrier_size() const { return threshold_ + period_; }

  bool contains(std::int64_t n) const {
    if (n < carrier_size()) return bits_[n];
    return bits_[threshold_ + (n - threshold_) % period_];
  }

  friend bool operator==(const UPSet&, const UPSet&) = default;

 private:
  int threshold_;
  int period_;
  std::vector<bool> bits_;
};

// α_S
inline MonoidElement hom(const UPSet& s, std::int64_t n) {
  if (n < 0) throw Error("hom of a negative number");
  if (n < s.carrier_size()) return {static_cast<int>(n)};
  return {static_cast<int>(s.threshold() + (n - s.threshold()) % s.period())};
}

// +_M
inline MonoidElement madd(const UPSet& s, MonoidElement a, MonoidElement b) {
  if (a.value < 0 || a.value >= s.carrier_size() || b.value < 0 || b.value >= s.carrier_size())
    throw Error("monoid element outside the carrier");
  int sum = a.value + b.value;
  if (sum < s.carrier_size()) return {sum};
  return {s.threshold() + (sum - s.threshold()) % s.period()};
}

inline bool accepts(const UPSet& s, MonoidElement e) {
  if (e.value < 0 || e.value >= s.carrier_size()) throw Error("monoid element outside the carrier");
  return s.bits()[e.value];
}

// Minimal period first, then minimal threshold for that period.
inline UPSet canonicalize(const UPSet& s) {
  const int n0 = s.threshold(), k0 = s.period();
  int best = k0;
  for (int p = 1; p < k0; ++p) {
    if (k0 % p) continue;
    bool ok = true;
    for (int n = n0; n < n0 + k0 && ok; ++n) ok = s.contains(n) == s.contains(n + p);
    if (ok) {
      best = p;
      break;
    }
  }
  int threshold = n0;
  while (threshold > 0 && s.contains(threshold - 1) == s.contains(threshold - 1 + best)) --threshold;
  std::vector<bool> bits(threshold + best);
  for (int n = 0; n < threshold + best; ++n) bits[n] = s.contains(n);
  return UPSet(threshold, best, std::move(bits));
}

namespace detail {

inline int parse_nat(const std::string& text, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (start == pos) throw ParseError(0, "expected a number in set '" + text + "'");
  if (pos - start > 6) throw ParseError(0, "number too large in set '" + text + "'");
  return std::stoi(text.substr(start, pos - start));
}

}  // namespace detail

// Grammar: "{a,b,...}" | ">=n" | "<=n" | "==n" | "even" | "odd" | "up(N,k;bits)"
inline UPSet upset_parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  auto finite = [](const std::vector<int>& members) {
    int top = members.empty() ? -1 : *std::max_element(members.begin(), members.end());
    std::vector<bool> bits(top + 2, false);
    for (int m : members) bits[m] = true;
    return canonicalize(UPSet(top + 1, 1, std::move(bits)));
  };
  if (text == "even") return UPSet(0, 2, {true, false});
  if (text == "odd") return UPSet(0, 2, {false, true});
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    std::vector<int> members;
    std::size_t pos = 1;
    if (text.size() > 2) {
      for (;;) {
        members.push_back(detail::parse_nat(text, pos));
        if (pos == text.size() - 1) break;
        if (text[pos] != ',') throw ParseError(0, "expected ',' in set '" + raw + "'");
        ++pos;
      }
    }
    return finite(members);
  }
  auto prefixed = [&](const std::string& op) { return text.rfind(op, 0) == 0; };
  if (prefixed(">=") || prefixed("<=") || prefixed("==")) {
    std::size_t pos = 2;
    int n = detail::parse_nat(text, pos);
    if (pos != text.size()) throw ParseError(0, "trailing characters in set '" + raw + "'");
    if (prefixed(">=")) {
      std::vector<bool> bits(n + 1, false);
      bits[n] = true;
      return canonicalize(UPSet(n, 1, std::move(bits)));
    }
    std::vector<int> members;
    if (prefixed("<="))
      for (int i = 0; i <= n; ++i) members.push_back(i);
    else
      members.push_back(n);
    return finite(members);
  }
  if (prefixed("up(") && text.back() == ')') {
    std::size_t pos = 3;
    int threshold = detail::parse_nat(text, pos);
    if (pos >= text.size() || text[pos++] != ',') throw ParseError(0, "expected ',' in '" + raw + "'");
    int period = detail::parse_nat(text, pos);
    if (pos >= text.size() || text[pos++] != ';') throw ParseError(0, "expected ';' in '" + raw + "'");
    if (period == 0) throw ParseError(0, "period must be positive in '" + raw + "'");
    std::vector<bool> bits;
    for (; pos + 1 < text.size(); ++pos) {
      if (text[pos] != '0' && text[pos] != '1') throw ParseError(0, "bits must be 0/1 in '" + raw + "'");
      bits.push_back(text[pos] == '1');
    }
    if (static_cast<int>(bits.size()) != threshold + period)
      throw ParseError(0, "up(N,k;bits) needs exactly N+k bits in '" + raw + "'");
    return canonicalize(UPSet(threshold, period, std::move(bits)));
  }
  throw ParseError(0, "unrecognized set '" + raw + "'");
}

// Shortest surface form that parses back to the same canonical set.
inline std::string to_string(const UPSet& s) {
  if (s == UPSet(0, 2, {true, false})) return "even";
  if (s == UPSet(0, 2, {false, true})) return "odd";
  if (s.period() == 1) {
    const int n = s.threshold();
    if (!s.bits()[n]) {
      std::string out = "{";
      for (int i = 0; i < n; ++i)
        if (s.bits()[i]) out += (out.size() > 1 ? "," : "") + std::to_string(i);
      return out + "}";
    }
    bool tail_only = std::none_of(s.bits().begin(), s.bits().begin() + n, [](bool b) { return b; });
    if (tail_only) return ">=" + std::to_string(n);
  }
  std::string out = "up(" + std::to_string(s.threshold()) + "," + std::to_string(s.period()) + ";";
  for (bool b : s.bits()) out += b ? '1' : '0';
  return out + ")";
}

}  // namespace ecml
