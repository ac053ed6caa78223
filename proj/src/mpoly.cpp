#include "bertini/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace bertini {

namespace {
constexpr uint64_t kHigh = 0x8080808080808080ULL;
}

// ---- Monomial ----

Monomial Monomial::variable(int i, int e) {
  return one().with_exponent(i, e);
}

Monomial Monomial::from_exponents(const std::vector<int>& exps) {
  if (int(exps.size()) > kMaxVars)
    throw std::invalid_argument("monomial: too many variables");
  Monomial m;
  int total = 0;
  for (size_t i = 0; i < exps.size(); ++i) {
    m = m.with_exponent(int(i), exps[i]);
    total += exps[i];
  }
  if (total > 255) throw std::overflow_error("monomial: total degree > 255");
  return m;
}

Monomial Monomial::with_exponent(int i, int e) const {
  if (i < 0 || i >= kMaxVars)
    throw std::invalid_argument("monomial: variable index out of range");
  if (e < 0 || e > kMaxExponent)
    throw std::invalid_argument("monomial: exponent out of range");
  Monomial m;
  m.bits = (bits & ~(uint64_t{0xff} << (8 * i))) | (uint64_t(e) << (8 * i));
  return m;
}

std::vector<int> Monomial::exponents(int nvars) const {
  std::vector<int> e(nvars);
  for (int i = 0; i < nvars; ++i) e[i] = exponent(i);
  return e;
}

Monomial Monomial::operator*(const Monomial& o) const {
  const uint64_t sum = bits + o.bits;
  if ((sum & kHigh) || degree() + o.degree() > 255)
    throw std::overflow_error("monomial: product exponent overflow");
  Monomial m;
  m.bits = sum;
  return m;
}

Monomial Monomial::operator/(const Monomial& d) const {
  if (!d.divides(*this))
    throw std::domain_error("monomial: quotient is not a monomial");
  Monomial m;
  m.bits = bits - d.bits;
  return m;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxVars; ++i) {
    const uint64_t ea = (a.bits >> (8 * i)) & 0xff;
    const uint64_t eb = (b.bits >> (8 * i)) & 0xff;
    m.bits |= (ea > eb ? ea : eb) << (8 * i);
  }
  return m;
}

bool Monomial::coprime(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kMaxVars; ++i) {
    if (((a.bits >> (8 * i)) & 0xff) && ((b.bits >> (8 * i)) & 0xff))
      return false;
  }
  return true;
}

std::string Monomial::str(int nvars) const {
  std::string out;
  for (int i = 0; i < nvars; ++i) {
    const int e = exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  if (a.bits == b.bits) return 0;
  // Equal degree: the packed value with the smaller most-significant
  // differing byte has the smaller exponent on the last unequal variable,
  // which is exactly the grevlex winner.
  return a.bits < b.bits ? 1 : -1;
}

int grevlex_compare(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("grevlex_compare: length mismatch");
  long da = 0, db = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0)
      throw std::invalid_argument("grevlex_compare: negative exponent");
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

// ---- Polynomial ----

Polynomial::Polynomial(FieldPtr field, int nvars)
    : field_(std::move(field)), nvars_(nvars) {
  if (!field_) throw std::invalid_argument("polynomial: null field");
  if (nvars < 1 || nvars > Monomial::kMaxVars)
    throw std::invalid_argument("polynomial: variable count out of range");
}

Polynomial Polynomial::from_terms(FieldPtr field, int nvars,
                                  std::vector<Term> terms) {
  Polynomial p(std::move(field), nvars);
  for (const Term& t : terms) {
    if (t.coeff >= p.field_->size())
      throw std::invalid_argument("polynomial: coefficient out of range");
    for (int i = nvars; i < Monomial::kMaxVars; ++i) {
      if (t.mono.exponent(i))
        throw std::invalid_argument("polynomial: exponent on unused variable");
    }
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return grevlex_compare(a.mono, b.mono) > 0;
  });
  for (const Term& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff = p.field_->add(p.terms_.back().coeff, t.coeff);
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(t);
    }
  }
  return p;
}

Polynomial Polynomial::constant(FieldPtr field, int nvars, uint32_t c) {
  return from_terms(std::move(field), nvars, {{Monomial::one(), c}});
}

Polynomial Polynomial::variable(FieldPtr field, int nvars, int i) {
  if (i < 0 || i >= nvars)
    throw std::invalid_argument("polynomial: variable index out of range");
  return from_terms(std::move(field), nvars, {{Monomial::variable(i), 1}});
}

const Term& Polynomial::leading() const {
  if (terms_.empty()) throw std::domain_error("polynomial: zero has no leading term");
  return terms_.front();
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

uint32_t Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  const Term& last = terms_.back();
  return last.mono.bits == 0 ? last.coeff : 0;
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (!field_ || !o.field_ || !field_->same(*o.field_) || nvars_ != o.nvars_)
    throw std::invalid_argument("polynomial: mixed fields or variable counts");
}

Polynomial Polynomial::axpy(uint32_t c, const Monomial& m,
                            const Polynomial& g) const {
  check_compatible(g);
  Polynomial out(field_, nvars_);
  if (c == 0) {
    out.terms_ = terms_;
    return out;
  }
  out.terms_.reserve(terms_.size() + g.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < g.terms_.size()) {
    if (j == g.terms_.size()) {
      out.terms_.push_back(terms_[i++]);
      continue;
    }
    const Monomial gm = g.terms_[j].mono * m;
    if (i == terms_.size()) {
      const uint32_t gc = field_->mul(c, g.terms_[j].coeff);
      if (gc) out.terms_.push_back({gm, gc});
      ++j;
      continue;
    }
    const int cmp = grevlex_compare(terms_[i].mono, gm);
    if (cmp > 0) {
      out.terms_.push_back(terms_[i++]);
    } else if (cmp < 0) {
      const uint32_t gc = field_->mul(c, g.terms_[j].coeff);
      if (gc) out.terms_.push_back({gm, gc});
      ++j;
    } else {
      const uint32_t sum =
          field_->add(terms_[i].coeff, field_->mul(c, g.terms_[j].coeff));
      if (sum) out.terms_.push_back({terms_[i].mono, sum});
      ++i;
      ++j;
    }
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  return axpy(1, Monomial::one(), o);
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return axpy(field_ ? field_->neg(field_->from_int(1)) : 0, Monomial::one(), o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_compatible(o);
  Polynomial acc(field_, nvars_);
  const Polynomial& longer = terms_.size() >= o.terms_.size() ? *this : o;
  const Polynomial& shorter = terms_.size() >= o.terms_.size() ? o : *this;
  for (const Term& t : shorter.terms_)
    acc = acc.axpy(t.coeff, t.mono, longer);
  return acc;
}

Polynomial Polynomial::scaled(uint32_t c) const {
  Polynomial out(field_, nvars_);
  if (c == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    const uint32_t v = field_->mul(t.coeff, c);
    if (v) out.terms_.push_back({t.mono, v});
  }
  return out;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  return scaled(field_->inv(leading().coeff));
}

Polynomial Polynomial::times_term(const Monomial& m, uint32_t c) const {
  Polynomial out(field_, nvars_);
  if (c == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    const uint32_t v = field_->mul(t.coeff, c);
    if (v) out.terms_.push_back({t.mono * m, v});
  }
  return out;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (!field_ || !o.field_) return !field_ && !o.field_;
  if (!field_->same(*o.field_) || nvars_ != o.nvars_) return false;
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].mono != o.terms_[i].mono ||
        terms_[i].coeff != o.terms_[i].coeff)
      return false;
  }
  return true;
}

uint32_t Polynomial::evaluate(const std::vector<uint32_t>& point) const {
  return evaluate(point, Embedding(field_, field_));
}

uint32_t Polynomial::evaluate(const std::vector<uint32_t>& point,
                              const Embedding& emb) const {
  if (!emb.source()->same(*field_))
    throw std::invalid_argument("evaluate: embedding source mismatch");
  if (int(point.size()) != nvars_)
    throw std::invalid_argument("evaluate: wrong point length");
  const Field& F = *emb.target();
  uint32_t acc = 0;
  for (const Term& t : terms_) {
    uint32_t v = emb(t.coeff);
    for (int i = 0; i < nvars_ && v; ++i) {
      const int e = t.mono.exponent(i);
      if (e) v = F.mul(v, F.pow(point[i], uint64_t(e)));
    }
    acc = F.add(acc, v);
  }
  return acc;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_)
    throw std::invalid_argument("derivative: variable index out of range");
  std::vector<Term> out;
  for (const Term& t : terms_) {
    const int e = t.mono.exponent(var);
    if (e == 0) continue;
    const uint32_t c = field_->mul(t.coeff, field_->from_int(e));
    if (c == 0) continue;
    out.push_back({t.mono.with_exponent(var, e - 1), c});
  }
  return from_terms(field_, nvars_, std::move(out));
}

Polynomial Polynomial::dehomogenize_at(int chart) const {
  if (chart < 0 || chart >= nvars_)
    throw std::invalid_argument("dehomogenize: chart index out of range");
  if (nvars_ < 2)
    throw std::invalid_argument("dehomogenize: need at least two variables");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    Monomial m;
    for (int i = 0, j = 0; i < nvars_; ++i) {
      if (i == chart) continue;
      m = m.with_exponent(j++, t.mono.exponent(i));
    }
    out.push_back({m, t.coeff});
  }
  return from_terms(field_, nvars_ - 1, std::move(out));
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const Term& t : terms_) {
    if (!out.empty()) out += " + ";
    const std::string ms = t.mono.str(nvars_);
    if (t.coeff == 1 && ms != "1") {
      out += ms;
    } else if (ms == "1") {
      out += field_->element_string(t.coeff);
    } else {
      out += field_->element_string(t.coeff) + "*" + ms;
    }
  }
  return out;
}

// ---- Form ----

Form::Form(Polynomial poly, int degree) : poly_(std::move(poly)), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("form: negative degree");
  for (const Term& t : poly_.terms()) {
    if (t.mono.degree() != degree)
      throw std::invalid_argument("form: polynomial is not homogeneous of degree " +
                                  std::to_string(degree));
  }
}

Form Form::zero(FieldPtr field, int nvars, int degree) {
  return Form(Polynomial(std::move(field), nvars), degree);
}

Form Form::derivative(int var) const {
  return Form(poly_.derivative(var), degree_ > 0 ? degree_ - 1 : 0);
}

// ---- monomial bases, sampling, enumeration ----

uint64_t monomial_count(int nvars, int d) {
  // binom(nvars - 1 + d, nvars - 1)
  unsigned __int128 num = 1;
  for (int i = 1; i < nvars; ++i) {
    num = num * unsigned(d + i) / unsigned(i);
    if (num > (unsigned __int128)UINT64_MAX)
      throw std::overflow_error("monomial_count: overflow");
  }
  return uint64_t(num);
}

std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  if (nvars < 1 || nvars > Monomial::kMaxVars)
    throw std::invalid_argument("monomials_of_degree: variable count");
  if (d < 0 || d > Monomial::kMaxExponent)
    throw std::invalid_argument("monomials_of_degree: degree out of range");
  std::vector<Monomial> out;
  std::vector<int> exps(nvars, 0);
  // Enumerate all compositions of d into nvars parts.
  std::function<void(int, int)> rec = [&](int var, int remaining) {
    if (var == nvars - 1) {
      exps[var] = remaining;
      out.push_back(Monomial::from_exponents(exps));
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[var] = e;
      rec(var + 1, remaining - e);
    }
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return grevlex_compare(a, b) > 0;
  });
  return out;
}

Form random_form(const FieldPtr& field, int nvars, int d, Rng& rng) {
  const auto mons = monomials_of_degree(nvars, d);
  std::vector<Term> terms;
  terms.reserve(mons.size());
  for (const Monomial& m : mons) {
    const uint32_t c = uint32_t(rng.below(field->size()));
    if (c) terms.push_back({m, c});
  }
  return Form(Polynomial::from_terms(field, nvars, std::move(terms)), d);
}

FormEnumeration::FormEnumeration(FieldPtr field, int nvars, int d,
                                 uint64_t max_count)
    : field_(std::move(field)), nvars_(nvars), degree_(d) {
  monomials_ = monomials_of_degree(nvars, d);
  const uint64_t q = field_->size();
  uint64_t c = 1;
  for (size_t i = 0; i < monomials_.size(); ++i) {
    if (c > max_count / q)
      throw std::invalid_argument("form enumeration larger than the configured bound");
    c *= q;
  }
  count_ = c;
}

Form FormEnumeration::at(uint64_t index) const {
  if (index >= count_) throw std::out_of_range("form enumeration index");
  const uint64_t q = field_->size();
  std::vector<Term> terms;
  for (const Monomial& m : monomials_) {
    const uint32_t c = uint32_t(index % q);
    index /= q;
    if (c) terms.push_back({m, c});
  }
  return Form(Polynomial::from_terms(field_, nvars_, std::move(terms)), degree_);
}

// ---- FormTuple and Jacobian ----

FormTuple::FormTuple(std::vector<Form> fs) : forms(std::move(fs)) {
  if (forms.empty()) throw std::invalid_argument("form tuple: empty");
  for (size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].degree() < 1)
      throw std::invalid_argument("form tuple: degrees must be >= 1");
    if (!forms[i].field()->same(*forms[0].field()) ||
        forms[i].nvars() != forms[0].nvars())
      throw std::invalid_argument("form tuple: mixed fields or variable counts");
    if (i && forms[i].degree() < forms[i - 1].degree())
      throw std::invalid_argument("form tuple: degrees must be ascending");
  }
}

std::vector<int> FormTuple::degrees() const {
  std::vector<int> d;
  d.reserve(forms.size());
  for (const Form& f : forms) d.push_back(f.degree());
  return d;
}

std::vector<std::vector<Form>> jacobian(const FormTuple& t) {
  std::vector<std::vector<Form>> J;
  J.reserve(t.forms.size());
  for (const Form& f : t.forms) {
    std::vector<Form> row;
    row.reserve(t.nvars());
    for (int j = 0; j < t.nvars(); ++j) row.push_back(f.derivative(j));
    J.push_back(std::move(row));
  }
  return J;
}

// ---- parsing ----

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(uint8_t(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

uint64_t parse_uint(Cursor& c) {
  c.skip_ws();
  size_t start = c.i;
  while (c.i < c.s.size() && std::isdigit(uint8_t(c.s[c.i]))) ++c.i;
  if (c.i == start) throw std::invalid_argument("polynomial parse: expected number");
  return std::stoull(c.s.substr(start, c.i - start));
}

// coefficient | x<idx>[^<exp>]
void parse_factor(Cursor& c, const FieldPtr& field, int nvars, uint32_t& coeff,
                  Monomial& mono) {
  c.skip_ws();
  if (c.peek() == '[') {
    const size_t close = c.s.find(']', c.i);
    if (close == std::string::npos)
      throw std::invalid_argument("polynomial parse: unterminated '['");
    coeff = field->mul(coeff, field->parse_element(c.s.substr(c.i, close - c.i + 1)));
    c.i = close + 1;
    return;
  }
  if (c.peek() == 'x') {
    ++c.i;
    const uint64_t var = parse_uint(c);
    if (var >= uint64_t(nvars))
      throw std::invalid_argument("polynomial parse: variable index out of range");
    int e = 1;
    if (c.peek() == '^') {
      ++c.i;
      e = int(parse_uint(c));
    }
    mono = mono * Monomial::variable(int(var), e);
    return;
  }
  if (std::isdigit(uint8_t(c.peek()))) {
    const uint64_t v = parse_uint(c);
    coeff = field->mul(coeff, field->from_int(int64_t(v % field->characteristic())));
    return;
  }
  throw std::invalid_argument("polynomial parse: unexpected character at position " +
                              std::to_string(c.i));
}

}  // namespace

Polynomial parse_polynomial(const FieldPtr& field, int nvars,
                            const std::string& text) {
  Cursor c{text};
  std::vector<Term> terms;
  bool first = true;
  while (!c.done()) {
    bool negate = false;
    if (!first || c.peek() == '+' || c.peek() == '-') {
      const char sign = c.peek();
      if (sign != '+' && sign != '-')
        throw std::invalid_argument("polynomial parse: expected '+' or '-'");
      negate = sign == '-';
      ++c.i;
    }
    first = false;
    uint32_t coeff = 1;
    Monomial mono;
    parse_factor(c, field, nvars, coeff, mono);
    while (c.peek() == '*') {
      ++c.i;
      parse_factor(c, field, nvars, coeff, mono);
    }
    if (negate) coeff = field->neg(coeff);
    terms.push_back({mono, coeff});
  }
  if (terms.empty())
    throw std::invalid_argument("polynomial parse: empty input");
  return Polynomial::from_terms(field, nvars, std::move(terms));
}

Form parse_form(const FieldPtr& field, int nvars, const std::string& text) {
  Polynomial p = parse_polynomial(field, nvars, text);
  const int d = p.total_degree();
  return Form(std::move(p), d < 0 ? 0 : d);
}

}  // namespace bertini
