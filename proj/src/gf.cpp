#include "bertini/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bertini {

namespace {

// ---- polynomial arithmetic over F_p, little-endian coefficient vectors ----

using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const Poly& f) { return int(f.size()) - 1; }  // deg(0) = -1

Poly poly_mul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = uint32_t((r[i + j] + uint64_t(a[i]) * b[j]) % p);
  }
  trim(r);
  return r;
}

uint32_t inv_mod_p(uint32_t a, uint32_t p) {
  // Fermat; p is prime and small.
  uint32_t r = 1, b = a % p;
  uint32_t e = p - 2;
  while (e) {
    if (e & 1) r = uint32_t(uint64_t(r) * b % p);
    b = uint32_t(uint64_t(b) * b % p);
    e >>= 1;
  }
  return r;
}

// a mod m, m monic not required (leading coeff inverted).
Poly poly_mod(Poly a, const Poly& m, uint32_t p) {
  trim(a);
  const int dm = deg(m);
  if (dm < 0) throw std::domain_error("poly_mod: zero modulus");
  const uint32_t lead_inv = inv_mod_p(m[dm], p);
  while (deg(a) >= dm) {
    const int shift = deg(a) - dm;
    const uint32_t c = uint32_t(uint64_t(a.back()) * lead_inv % p);
    for (int i = 0; i <= dm; ++i) {
      uint64_t sub = uint64_t(c) * m[i] % p;
      a[i + shift] = uint32_t((a[i + shift] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint32_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
    base = poly_mod(poly_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool Field::poly_irreducible(const std::vector<uint32_t>& f, uint32_t p) {
  const int d = deg(f);
  if (d < 1) return false;
  if (d == 1) return true;
  // x^(p^d) == x mod f, and x^(p^(d/t)) != x for every prime t | d.
  const Poly x{0, 1};
  uint64_t pd = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  Poly xp = poly_powmod(x, pd, f, p);
  if (poly_sub(xp, x, p) != Poly{}) return false;
  for (uint64_t t : prime_factors(uint64_t(d))) {
    uint64_t e = 1;
    for (int i = 0; i < d / int(t); ++i) e *= p;
    Poly g = poly_sub(poly_powmod(x, e, f, p), x, p);
    if (deg(poly_gcd(f, g, p)) != 0) return false;
  }
  return true;
}

Field::Field(uint32_t p, uint32_t s, std::vector<uint32_t> modulus)
    : p_(p), s_(s), modulus_(std::move(modulus)) {
  q_ = 1;
  for (uint32_t i = 0; i < s_; ++i) q_ *= p_;
  if (q_ <= kTableLimit) {
    build_tables();  // also records the smallest generator
  } else {
    const auto factors = prime_factors(q_ - 1);
    for (uint32_t g = 1; g < q_; ++g) {
      bool ok = true;
      for (uint64_t f : factors) {
        if (pow_slow(g, (q_ - 1) / f) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        generator_ = g;
        break;
      }
    }
  }
}

FieldPtr Field::create(uint32_t p, uint32_t s, uint64_t max_size) {
  if (!is_prime(p)) throw std::invalid_argument("field: p must be prime");
  if (s < 1) throw std::invalid_argument("field: extension degree must be >= 1");
  // Overflow-safe size check.
  uint64_t q = 1;
  for (uint32_t i = 0; i < s; ++i) {
    if (q > max_size / p)
      throw std::invalid_argument("field: size exceeds configured bound");
    q *= p;
  }
  if (q > max_size)
    throw std::invalid_argument("field: size exceeds configured bound");

  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, std::weak_ptr<const Field>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, s}];
  if (auto existing = slot.lock()) return existing;

  std::vector<uint32_t> modulus;
  if (s == 1) {
    modulus = {0, 1};  // x, by convention
  } else {
    // Monic degree-s polynomials in ascending packed-code order: the packed
    // code of c_0 + c_1 x + ... + x^s is sum c_i p^i, so iterating the lower
    // coefficients as a base-p counter visits candidates smallest first.
    uint64_t lower_count = 1;
    for (uint32_t i = 0; i < s; ++i) lower_count *= p;
    for (uint64_t code = 0; code < lower_count; ++code) {
      std::vector<uint32_t> f(s + 1, 0);
      uint64_t v = code;
      for (uint32_t i = 0; i < s; ++i) {
        f[i] = uint32_t(v % p);
        v /= p;
      }
      f[s] = 1;
      if (poly_irreducible(f, p)) {
        modulus = std::move(f);
        break;
      }
    }
    if (modulus.empty())
      throw std::logic_error("field: no irreducible modulus found");
  }
  auto field = std::shared_ptr<const Field>(new Field(p, s, std::move(modulus)));
  slot = field;
  return field;
}

FieldPtr Field::parse(const std::string& text, uint64_t max_size) {
  uint64_t p = 0, s = 1;
  const auto caret = text.find('^');
  try {
    if (caret == std::string::npos) {
      size_t used = 0;
      uint64_t q = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      if (is_prime(q)) {
        p = q;
      } else {
        // Smallest prime power decomposition.
        for (uint64_t cand = 2; cand * cand <= q; ++cand) {
          if (q % cand) continue;
          uint64_t v = q, e = 0;
          while (v % cand == 0) {
            v /= cand;
            ++e;
          }
          if (v == 1) {
            p = cand;
            s = e;
          }
          break;
        }
        if (p == 0) throw std::invalid_argument(text);
      }
    } else {
      size_t used = 0;
      p = std::stoull(text.substr(0, caret), &used);
      if (used != caret) throw std::invalid_argument(text);
      s = std::stoull(text.substr(caret + 1), &used);
      if (used != text.size() - caret - 1) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("field: cannot parse '" + text + "'");
  }
  if (p > 0xffffffffULL || s > 0xffffffffULL)
    throw std::invalid_argument("field: cannot parse '" + text + "'");
  return create(uint32_t(p), uint32_t(s), max_size);
}

std::string Field::name() const {
  if (s_ == 1) return std::to_string(p_);
  return std::to_string(p_) + "^" + std::to_string(s_);
}

void Field::build_tables() {
  // Find the smallest generator with plain polynomial arithmetic, tabulate.
  const auto factors = prime_factors(q_ - 1);
  uint32_t g = 0;
  for (uint32_t cand = 1; cand < q_; ++cand) {
    bool ok = true;
    for (uint64_t f : factors) {
      if (pow_slow(cand, (q_ - 1) / f) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = cand;
      break;
    }
  }
  generator_ = g;
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  uint32_t v = 1;
  for (uint64_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = v;
    log_[v] = uint32_t(i);
    v = mul_slow(v, g);
  }
  tables_ = true;
}

uint32_t Field::add(uint32_t a, uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (s_ == 1) return (a + b) % p_;
  uint32_t r = 0, mult = 1;
  for (uint32_t i = 0; i < s_; ++i) {
    r += ((a % p_ + b % p_) % p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

uint32_t Field::neg(uint32_t a) const {
  if (p_ == 2) return a;
  if (s_ == 1) return a == 0 ? 0 : p_ - a;
  uint32_t r = 0, mult = 1;
  for (uint32_t i = 0; i < s_; ++i) {
    uint32_t d = a % p_;
    r += (d == 0 ? 0 : p_ - d) * mult;
    a /= p_;
    mult *= p_;
  }
  return r;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::mul_slow(uint32_t a, uint32_t b) const {
  if (s_ == 1) return uint32_t(uint64_t(a) * b % p_);
  Poly fa = Poly(s_), fb = Poly(s_);
  for (uint32_t i = 0; i < s_; ++i) {
    fa[i] = a % p_;
    a /= p_;
    fb[i] = b % p_;
    b /= p_;
  }
  Poly r = poly_mod(poly_mul(fa, fb, p_), modulus_, p_);
  uint32_t code = 0, mult = 1;
  for (uint32_t i = 0; i < s_; ++i) {
    if (i < r.size()) code += r[i] * mult;
    mult *= p_;
  }
  return code;
}

uint32_t Field::mul(uint32_t a, uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (tables_) {
    uint64_t e = uint64_t(log_[a]) + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  return mul_slow(a, b);
}

uint32_t Field::pow_slow(uint32_t a, uint64_t e) const {
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul_slow(r, a);
    a = mul_slow(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (tables_) {
    uint64_t le = uint64_t(log_[a]) % (q_ - 1) * (e % (q_ - 1)) % (q_ - 1);
    return exp_[le];
  }
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("field: inverse of zero");
  if (tables_) {
    uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : q_ - 1 - l];
  }
  return pow(a, q_ - 2);
}

uint32_t Field::from_int(int64_t v) const {
  int64_t r = v % int64_t(p_);
  if (r < 0) r += p_;
  return uint32_t(r);
}

uint32_t Field::subfield_degree(uint32_t a) const {
  for (uint32_t t = 1; t <= s_; ++t) {
    if (s_ % t) continue;
    uint64_t pt = 1;
    for (uint32_t i = 0; i < t; ++i) pt *= p_;
    if (pow(a, pt) == a) return t;
  }
  throw std::logic_error("field: subfield_degree unreachable");
}

std::vector<uint32_t> Field::digits(uint32_t a) const {
  std::vector<uint32_t> d(s_);
  for (uint32_t i = 0; i < s_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

uint32_t Field::from_digits(const std::vector<uint32_t>& d) const {
  if (d.size() != s_) throw std::invalid_argument("field: digit count");
  uint32_t code = 0, mult = 1;
  for (uint32_t i = 0; i < s_; ++i) {
    if (d[i] >= p_) throw std::invalid_argument("field: digit out of range");
    code += d[i] * mult;
    mult *= p_;
  }
  return code;
}

std::string Field::element_string(uint32_t a) const {
  if (s_ == 1) return std::to_string(a);
  std::string out = "[";
  const auto d = digits(a);
  for (uint32_t i = 0; i < s_; ++i) {
    if (i) out += ",";
    out += std::to_string(d[i]);
  }
  return out + "]";
}

uint32_t Field::parse_element(const std::string& text) const {
  try {
    if (!text.empty() && text.front() == '[') {
      if (text.back() != ']') throw std::invalid_argument(text);
      std::vector<uint32_t> d;
      std::stringstream ss(text.substr(1, text.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) d.push_back(uint32_t(std::stoul(item)));
      return from_digits(d);
    }
    size_t used = 0;
    uint64_t v = std::stoull(text, &used);
    if (used != text.size() || v >= q_) throw std::invalid_argument(text);
    return uint32_t(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("field: cannot parse element '" + text + "'");
  }
}

// ---- FieldElem ----

namespace {
void check_same(const FieldElem& a, const FieldElem& b) {
  if (!a.field || !b.field || !a.field->same(*b.field))
    throw std::invalid_argument("field elements from different fields");
}
}  // namespace

FieldElem FieldElem::operator+(const FieldElem& o) const {
  check_same(*this, o);
  return {field, field->add(code, o.code)};
}
FieldElem FieldElem::operator-(const FieldElem& o) const {
  check_same(*this, o);
  return {field, field->sub(code, o.code)};
}
FieldElem FieldElem::operator*(const FieldElem& o) const {
  check_same(*this, o);
  return {field, field->mul(code, o.code)};
}
FieldElem FieldElem::operator-() const { return {field, field->neg(code)}; }
FieldElem FieldElem::inverse() const { return {field, field->inv(code)}; }
FieldElem FieldElem::pow(uint64_t e) const { return {field, field->pow(code, e)}; }
bool FieldElem::operator==(const FieldElem& o) const {
  check_same(*this, o);
  return code == o.code;
}

// ---- Embedding ----

Embedding::Embedding(FieldPtr src, FieldPtr dst)
    : src_(std::move(src)), dst_(std::move(dst)) {
  if (!src_ || !dst_) throw std::invalid_argument("embedding: null field");
  if (src_->characteristic() != dst_->characteristic() ||
      dst_->degree() % src_->degree() != 0)
    throw std::invalid_argument("embedding: no field map " + src_->name() +
                                " -> " + dst_->name());
  if (src_->same(*dst_)) {
    identity_ = true;
    return;
  }
  identity_ = false;
  // Smallest root of the source modulus in the target, by code order.
  const auto& mod = src_->modulus();
  uint32_t root = 0;
  bool found = false;
  for (uint64_t cand = 0; cand < dst_->size(); ++cand) {
    uint32_t acc = 0;
    for (size_t i = mod.size(); i-- > 0;) {
      acc = dst_->mul(acc, uint32_t(cand));
      acc = dst_->add(acc, dst_->from_int(mod[i]));
    }
    if (acc == 0) {
      root = uint32_t(cand);
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("embedding: modulus has no root");
  basis_image_.resize(src_->degree());
  uint32_t pw = 1;
  for (uint32_t i = 0; i < src_->degree(); ++i) {
    basis_image_[i] = pw;
    pw = dst_->mul(pw, root);
  }
}

uint32_t Embedding::operator()(uint32_t a) const {
  if (identity_) return a;
  const auto d = src_->digits(a);
  uint32_t out = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    if (!d[i]) continue;
    out = dst_->add(out, dst_->mul(dst_->from_int(d[i]), basis_image_[i]));
  }
  return out;
}

}  // namespace bertini
