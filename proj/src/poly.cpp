#include "gradcalc/poly.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "gradcalc/error.hpp"

namespace gradcalc {

Rational make_rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(s, 10));
    mpz_class num(s.substr(0, slash), 10);
    mpz_class den(s.substr(slash + 1), 10);
    if (den == 0) throw DomainError("rational with zero denominator: " + s);
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed rational: " + s);
  }
}

std::string to_string(const Rational& q) { return q.get_str(10); }

ChartToken common_token(const ChartToken& a, const ChartToken& b) {
  if (a.id == b.id) return a;
  if (a.id == 0) return b;
  if (b.id == 0) return a;
  throw ChartMismatch("polynomials live on different charts");
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(VarRef v, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) m.f_.push_back({v.index, exp});
  return m;
}

Monomial Monomial::from_sorted(Storage factors) {
  Monomial m;
  m.f_ = std::move(factors);
  return m;
}

std::uint32_t Monomial::exponent(VarRef v) const {
  for (const auto& f : f_) {
    if (f.var == v.index) return f.exp;
    if (f.var > v.index) break;
  }
  return 0;
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& f : f_) d += f.exp;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  auto a = f_.begin(), ae = f_.end();
  auto b = o.f_.begin(), be = o.f_.end();
  while (a != ae && b != be) {
    if (a->var < b->var) {
      r.f_.push_back(*a++);
    } else if (b->var < a->var) {
      r.f_.push_back(*b++);
    } else {
      r.f_.push_back({a->var, a->exp + b->exp});
      ++a;
      ++b;
    }
  }
  r.f_.insert(r.f_.end(), a, ae);
  r.f_.insert(r.f_.end(), b, be);
  return r;
}

Monomial Monomial::divided_by(VarRef v) const {
  Monomial r;
  r.f_.reserve(f_.size());
  for (const auto& f : f_) {
    if (f.var == v.index) {
      if (f.exp > 1) r.f_.push_back({f.var, f.exp - 1});
    } else {
      r.f_.push_back(f);
    }
  }
  return r;
}

Monomial Monomial::without(VarRef v) const {
  Monomial r;
  r.f_.reserve(f_.size());
  for (const auto& f : f_)
    if (f.var != v.index) r.f_.push_back(f);
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  auto da = a.total_degree(), db = b.total_degree();
  if (da != db) return da <=> db;
  std::size_t n = std::min(a.f_.size(), b.f_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fa = a.f_[i];
    const auto& fb = b.f_[i];
    if (fa.var != fb.var) {
      // the monomial carrying the smaller variable is larger
      return fa.var < fb.var ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (fa.exp != fb.exp) return fa.exp <=> fb.exp;
  }
  // equal total degree and a common prefix means equal
  return a.f_.size() <=> b.f_.size();
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : f_) {
    h ^= (static_cast<std::size_t>(f.var) << 20 ^ f.exp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// -------------------------------------------------------------------- Poly

namespace {

void canonicalize(std::vector<Poly::Term>& terms) {
  for (auto& t : terms) t.coef.canonicalize();
  std::sort(terms.begin(), terms.end(),
            [](const Poly::Term& a, const Poly::Term& b) { return a.mono < b.mono; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Rational c = terms[i].coef;
    while (j < terms.size() && terms[j].mono == terms[i].mono) c += terms[j++].coef;
    if (c != 0) {
      if (out != i) terms[out].mono = std::move(terms[i].mono);
      terms[out].coef = std::move(c);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

void check_span(const Poly& p, ChartToken token) {
  if (token.bound() && p.span_end() > token.nvars)
    throw DomainError("variable index out of range for chart");
}

}  // namespace

Poly::Poly(const Rational& c, ChartToken token) : token_(token) {
  if (c != 0) terms_.push_back({Monomial{}, c});
  if (!terms_.empty()) terms_[0].coef.canonicalize();
}

Poly Poly::variable(ChartToken token, VarRef v) {
  if (!token.bound() || v.index >= token.nvars) throw DomainError("variable index out of range for chart");
  Poly p;
  p.token_ = token;
  p.terms_.push_back({Monomial::variable(v), Rational(1)});
  return p;
}

Poly Poly::monomial(ChartToken token, Monomial m, Rational coef) {
  Poly p;
  p.token_ = token;
  coef.canonicalize();
  if (coef != 0) p.terms_.push_back({std::move(m), std::move(coef)});
  if (!p.is_constant() && !token.bound()) throw DomainError("non-constant polynomial needs a chart");
  check_span(p, token);
  return p;
}

Poly Poly::from_terms(ChartToken token, std::vector<Term> terms) {
  Poly p;
  p.token_ = token;
  p.terms_ = std::move(terms);
  canonicalize(p.terms_);
  if (!p.is_constant() && !token.bound()) throw DomainError("non-constant polynomial needs a chart");
  check_span(p, token);
  return p;
}

Poly Poly::rebind(ChartToken token) const {
  if (token_ == token) return *this;
  if (!is_constant()) {
    if (!token.bound()) throw DomainError("non-constant polynomial needs a chart");
    check_span(*this, token);
  }
  Poly p = *this;
  p.token_ = token;
  return p;
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.front().mono.is_one()) return terms_.front().coef;
  return Rational(0);
}

std::uint64_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.back().mono.total_degree(); }

std::uint32_t Poly::span_end() const {
  std::uint32_t e = 0;
  for (const auto& t : terms_) e = std::max(e, t.mono.span_end());
  return e;
}

Poly& Poly::operator+=(const Poly& o) {
  token_ = common_token(token_, o.token_);
  if (&o == this) return *this *= Rational(2);
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = o.terms_;
    return *this;
  }
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin(), ae = terms_.end();
  auto b = o.terms_.begin(), be = o.terms_.end();
  while (a != ae && b != be) {
    auto c = a->mono <=> b->mono;
    if (c < 0) {
      out.push_back(std::move(*a++));
    } else if (c > 0) {
      out.push_back(*b++);
    } else {
      Rational s = a->coef + b->coef;
      if (s != 0) out.push_back({std::move(a->mono), std::move(s)});
      ++a;
      ++b;
    }
  }
  for (; a != ae; ++a) out.push_back(std::move(*a));
  for (; b != be; ++b) out.push_back(*b);
  terms_ = std::move(out);
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rational& c0) {
  Rational c = c0;
  c.canonicalize();
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.token_ = common_token(a.token_, b.token_);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (a.terms_.size() == 1 && a.terms_[0].mono.is_one()) {
    Poly s = b;
    s.token_ = r.token_;
    return s *= a.terms_[0].coef;
  }
  if (b.terms_.size() == 1 && b.terms_[0].mono.is_one()) {
    Poly s = a;
    s.token_ = r.token_;
    return s *= b.terms_[0].coef;
  }
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) r.terms_.push_back({ta.mono * tb.mono, ta.coef * tb.coef});
  canonicalize(r.terms_);
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::pow(unsigned e) const {
  Poly result(Rational(1), token_);
  Poly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.token_.id != b.token_.id && a.token_.bound() && b.token_.bound() && !a.is_constant()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
  }
  return true;
}

std::size_t Poly::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h = h * 1000003ULL ^ t.mono.hash();
    h = h * 1000003ULL ^ std::hash<std::string>{}(t.coef.get_str(16));
  }
  return h;
}

Poly poly_add(const Poly& a, const Poly& b) { return a + b; }
Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }

Poly partial_derivative(const Poly& f, VarRef v) {
  if (v.index >= f.token().nvars) throw DomainError("variable index out of range for chart");
  std::vector<Poly::Term> out;
  for (const auto& t : f.terms()) {
    auto e = t.mono.exponent(v);
    if (e == 0) continue;
    out.push_back({t.mono.divided_by(v), t.coef * e});
  }
  return Poly::from_terms(f.token(), std::move(out));
}

Poly substitute(const Poly& f, const std::map<VarRef, Poly>& assignment) {
  ChartToken target;
  for (const auto& [v, img] : assignment) target = common_token(target, img.token());
  Poly result(Rational(0), target);
  // Powers are cached per variable since jets repeat the same images.
  std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> powers;
  auto power = [&](std::uint32_t var, std::uint32_t e) -> const Poly& {
    auto key = std::make_pair(var, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    auto a = assignment.find(VarRef{var});
    if (a == assignment.end())
      throw DomainError("substitution does not assign variable " + std::to_string(var));
    return powers.emplace(key, a->second.pow(e)).first->second;
  };
  for (const auto& t : f.terms()) {
    Poly term(t.coef, target);
    for (const auto& fac : t.mono.factors()) term = term * power(fac.var, fac.exp);
    result += term;
  }
  return result;
}

long weight_of_monomial(const Monomial& m, std::span<const int> var_weights) {
  long w = 0;
  for (const auto& f : m.factors()) {
    if (f.var >= var_weights.size()) throw DomainError("variable index out of range for weights");
    w += static_cast<long>(f.exp) * var_weights[f.var];
  }
  return w;
}

std::map<long, Poly> homogeneous_components(const Poly& f, std::span<const int> var_weights) {
  std::map<long, std::vector<Poly::Term>> parts;
  for (const auto& t : f.terms()) parts[weight_of_monomial(t.mono, var_weights)].push_back(t);
  std::map<long, Poly> out;
  for (auto& [w, terms] : parts) out.emplace(w, Poly::from_terms(f.token(), std::move(terms)));
  return out;
}

Rational evaluate(const Poly& f, std::span<const Rational> point) {
  Rational acc = 0;
  for (const auto& t : f.terms()) {
    Rational v = t.coef;
    for (const auto& fac : t.mono.factors()) {
      if (fac.var >= point.size()) throw DomainError("evaluation point misses a coordinate");
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), point[fac.var].get_num_mpz_t(), fac.exp);
      mpz_pow_ui(p.get_den_mpz_t(), point[fac.var].get_den_mpz_t(), fac.exp);
      v *= p;
    }
    acc += v;
  }
  return acc;
}

std::string render(const Poly& f, std::span<const std::string> names) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto terms = f.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    Rational c = it->coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = (c == 1);
    if (!unit || it->mono.is_one()) {
      os << to_string(c);
      if (!it->mono.is_one()) os << "*";
    }
    bool firstf = true;
    for (const auto& fac : it->mono.factors()) {
      if (!firstf) os << "*";
      firstf = false;
      if (fac.var < names.size())
        os << names[fac.var];
      else
        os << "v" << fac.var;
      if (fac.exp > 1) os << "^" << fac.exp;
    }
  }
  return os.str();
}

}  // namespace gradcalc
