// Sparse multivariate polynomials over a finite field in graded reverse
// lexicographic (grevlex) order, plus homogeneous forms with sampling,
// enumeration, evaluation at extension-field points and formal derivatives.
//
// A monomial packs one exponent byte per variable into a uint64, so at most
// 8 variables with exponents at most 127 and total degree at most 255. That
// covers projective spaces up to P^7 and degrees far beyond what any
// experiment here enumerates, and makes comparisons and divisibility tests
// single-word operations.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bertini/gf.hpp"
#include "bertini/rng.hpp"

namespace bertini {

struct Monomial {
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxExponent = 127;

  uint64_t bits = 0;

  static Monomial one() { return {}; }
  static Monomial variable(int i, int e = 1);
  static Monomial from_exponents(const std::vector<int>& exps);

  int exponent(int i) const { return int((bits >> (8 * i)) & 0xff); }
  Monomial with_exponent(int i, int e) const;
  std::vector<int> exponents(int nvars) const;

  // Total degree: SWAR byte sum, valid while the total stays below 256.
  int degree() const {
    return int((bits * 0x0101010101010101ULL) >> 56);
  }

  bool divides(const Monomial& m) const {
    // Per-byte a_i <= b_i without carries: (b | H) - a keeps every high bit
    // set exactly when no byte borrows.
    constexpr uint64_t H = 0x8080808080808080ULL;
    return (((m.bits | H) - bits) & H) == H;
  }

  Monomial operator*(const Monomial& o) const;           // exponent sum
  Monomial operator/(const Monomial& d) const;           // requires d.divides(*this)
  static Monomial lcm(const Monomial& a, const Monomial& b);
  static bool coprime(const Monomial& a, const Monomial& b);

  bool operator==(const Monomial& o) const { return bits == o.bits; }
  bool operator!=(const Monomial& o) const { return bits != o.bits; }

  std::string str(int nvars) const;  // "x0^2*x2", "1" for the unit
};

// -1, 0, +1 as a < b, a == b, a > b in grevlex: higher total degree wins;
// on ties the monomial whose last unequal exponent is larger is smaller.
int grevlex_compare(const Monomial& a, const Monomial& b);
int grevlex_compare(const std::vector<int>& a, const std::vector<int>& b);

inline bool grevlex_less(const Monomial& a, const Monomial& b) {
  return grevlex_compare(a, b) < 0;
}

struct Term {
  Monomial mono;
  uint32_t coeff = 0;  // field code, nonzero in normalized polynomials
};

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(FieldPtr field, int nvars);

  // Normalizes: sorts grevlex-descending, merges duplicates, drops zeros.
  static Polynomial from_terms(FieldPtr field, int nvars,
                               std::vector<Term> terms);
  static Polynomial constant(FieldPtr field, int nvars, uint32_t c);
  static Polynomial variable(FieldPtr field, int nvars, int i);

  const FieldPtr& field() const { return field_; }
  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  const Term& leading() const;          // throws std::domain_error on zero
  int total_degree() const;             // -1 for the zero polynomial
  bool is_constant() const { return terms_.empty() || leading().mono.bits == 0; }
  uint32_t constant_value() const;      // coefficient of 1 (0 if absent)

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(uint32_t c) const;
  Polynomial monic() const;             // leading coefficient 1; zero stays zero
  Polynomial times_term(const Monomial& m, uint32_t c) const;
  // this + c * x^m * g in one sorted merge (the division-step workhorse).
  Polynomial axpy(uint32_t c, const Monomial& m, const Polynomial& g) const;

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  uint32_t evaluate(const std::vector<uint32_t>& point) const;
  // Point lives in emb.target(); coefficients are mapped through emb.
  uint32_t evaluate(const std::vector<uint32_t>& point,
                    const Embedding& emb) const;
  Polynomial derivative(int var) const;
  // Substitute x_chart = 1 and renumber the remaining variables in order.
  Polynomial dehomogenize_at(int chart) const;

  std::string str() const;  // terms in grevlex-descending order

 private:
  void check_compatible(const Polynomial& o) const;
  FieldPtr field_;
  int nvars_ = 0;
  std::vector<Term> terms_;  // strictly descending grevlex, nonzero coeffs
};

// Homogeneous form: a polynomial whose terms all share one total degree.
// The degree is tracked explicitly so the zero form of S_d keeps its d.
class Form {
 public:
  Form() = default;
  Form(Polynomial poly, int degree);  // throws unless homogeneous of that degree
  static Form zero(FieldPtr field, int nvars, int degree);

  const Polynomial& poly() const { return poly_; }
  int degree() const { return degree_; }
  int nvars() const { return poly_.nvars(); }
  const FieldPtr& field() const { return poly_.field(); }
  bool is_zero() const { return poly_.is_zero(); }

  Form derivative(int var) const;  // degree max(degree-1, 0)
  Polynomial dehomogenize(int chart) const { return poly_.dehomogenize_at(chart); }
  uint32_t evaluate(const std::vector<uint32_t>& point) const {
    return poly_.evaluate(point);
  }
  uint32_t evaluate(const std::vector<uint32_t>& point,
                    const Embedding& emb) const {
    return poly_.evaluate(point, emb);
  }
  bool operator==(const Form& o) const {
    return degree_ == o.degree_ && poly_ == o.poly_;
  }

  std::string str() const { return poly_.str(); }

 private:
  Polynomial poly_;
  int degree_ = 0;
};

// All monomials of the given total degree, grevlex-descending.
std::vector<Monomial> monomials_of_degree(int nvars, int d);
uint64_t monomial_count(int nvars, int d);  // binom(nvars-1+d, d)

// Uniform draw from S_d: every coefficient uniform over the field, in the
// monomials_of_degree order, one below(q) draw per coefficient.
Form random_form(const FieldPtr& field, int nvars, int d, Rng& rng);

// Canonical indexing of all q^M forms of degree d: the coefficient of
// monomial j (in monomials_of_degree order) is base-q digit j of the index.
class FormEnumeration {
 public:
  FormEnumeration(FieldPtr field, int nvars, int d,
                  uint64_t max_count = uint64_t{1} << 22);
  uint64_t count() const { return count_; }
  Form at(uint64_t index) const;
  const std::vector<Monomial>& monomials() const { return monomials_; }

 private:
  FieldPtr field_;
  int nvars_, degree_;
  std::vector<Monomial> monomials_;
  uint64_t count_;
};

// Tuple (f_1, ..., f_k) over one field and variable set, degrees ascending.
struct FormTuple {
  std::vector<Form> forms;

  FormTuple() = default;
  explicit FormTuple(std::vector<Form> fs);  // validates

  int k() const { return int(forms.size()); }
  int nvars() const { return forms.at(0).nvars(); }
  const FieldPtr& field() const { return forms.at(0).field(); }
  std::vector<int> degrees() const;
};

// k x (n+1) matrix of formal partials, entry (i, j) = d f_i / d x_j.
std::vector<std::vector<Form>> jacobian(const FormTuple& t);

// Parses "x0^2*x1 + 3*x2^3" style text; coefficients in element syntax
// (integers over prime fields, "[c0,c1,...]" over extensions).
Polynomial parse_polynomial(const FieldPtr& field, int nvars,
                            const std::string& text);
Form parse_form(const FieldPtr& field, int nvars, const std::string& text);

}  // namespace bertini
