// Arithmetic in finite fields F_{p^s} with deterministic construction.
//
// Elements are integer codes in [0, p^s): the base-p digits of the code are
// the coordinates in the power basis 1, x, x^2, ... of F_p[x]/(modulus),
// least significant digit first. Code order is therefore a fixed canonical
// enumeration of the field with 0 first and 1 second. The modulus is the
// monic irreducible of degree s whose packed code (sum of coeff_i * p^i) is
// smallest, so two fields with the same (p, s) are always identical.
//
// Fields with at most 2^16 elements carry discrete log/exp tables over a
// fixed generator; larger fields fall back to polynomial arithmetic.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bertini {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static constexpr uint64_t kDefaultMaxSize = uint64_t{1} << 20;
  static constexpr uint64_t kTableLimit = uint64_t{1} << 16;

  // Shared, cached instances: create(p, s) twice yields the same object.
  static FieldPtr create(uint32_t p, uint32_t s,
                         uint64_t max_size = kDefaultMaxSize);
  // Accepts "p^s", "p" or a prime power like "9"; throws std::invalid_argument.
  static FieldPtr parse(const std::string& text,
                        uint64_t max_size = kDefaultMaxSize);

  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return s_; }
  uint64_t size() const { return q_; }
  // Coefficients of the modulus, index i = coefficient of x^i, length s+1,
  // monic. For s = 1 this is x - 0, i.e. {0, 1}.
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  std::string name() const;

  bool same(const Field& o) const { return p_ == o.p_ && s_ == o.s_; }

  uint32_t add(uint32_t a, uint32_t b) const;
  uint32_t sub(uint32_t a, uint32_t b) const;
  uint32_t neg(uint32_t a) const;
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const;  // throws std::domain_error on 0
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
  uint32_t pow(uint32_t a, uint64_t e) const;  // 0^0 = 1
  // Image of an ordinary integer under Z -> F_p c F_{p^s}.
  uint32_t from_int(int64_t v) const;
  // Smallest code that generates the multiplicative group.
  uint32_t generator() const { return generator_; }
  uint32_t frobenius(uint32_t a) const { return pow(a, p_); }
  // Least t (dividing s) with a in F_{p^t}.
  uint32_t subfield_degree(uint32_t a) const;

  std::vector<uint32_t> digits(uint32_t a) const;  // s base-p digits
  uint32_t from_digits(const std::vector<uint32_t>& d) const;
  // "c" over a prime field, "[c0,c1,...]" (power-basis digits) otherwise.
  std::string element_string(uint32_t a) const;
  uint32_t parse_element(const std::string& text) const;

  // Polynomial utilities over F_p, used for modulus selection and exposed
  // for independent checking. Coefficient vectors are little-endian.
  static bool poly_irreducible(const std::vector<uint32_t>& f, uint32_t p);

 private:
  Field(uint32_t p, uint32_t s, std::vector<uint32_t> modulus);
  void build_tables();
  uint32_t mul_slow(uint32_t a, uint32_t b) const;
  uint32_t pow_slow(uint32_t a, uint64_t e) const;

  uint32_t p_ = 0, s_ = 0;
  uint64_t q_ = 0;
  std::vector<uint32_t> modulus_;
  uint32_t generator_ = 0;
  bool tables_ = false;
  std::vector<uint32_t> log_, exp_;  // exp_[i] = g^i, log_[exp_[i]] = i
};

// Element paired with its field, for call sites that want checked arithmetic.
// Mixing fields throws std::invalid_argument.
struct FieldElem {
  FieldPtr field;
  uint32_t code = 0;

  FieldElem() = default;
  FieldElem(FieldPtr f, uint32_t c) : field(std::move(f)), code(c) {}

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem inverse() const;
  FieldElem pow(uint64_t e) const;
  bool operator==(const FieldElem& o) const;
  bool is_zero() const { return code == 0; }
};

// Field embedding F_{p^s} -> F_{p^t} for s | t. The prime subfield is fixed;
// the power-basis generator of the source maps to the smallest root (in code
// order) of the source modulus inside the target, which makes the embedding
// deterministic. Composition of the canonical embeddings along a divisor
// chain again gives the canonical embedding.
class Embedding {
 public:
  Embedding(FieldPtr src, FieldPtr dst);  // throws std::invalid_argument
  uint32_t operator()(uint32_t a) const;
  const FieldPtr& source() const { return src_; }
  const FieldPtr& target() const { return dst_; }
  bool is_identity() const { return identity_; }

 private:
  FieldPtr src_, dst_;
  bool identity_ = true;
  std::vector<uint32_t> basis_image_;  // image of x^i, i < s
};

bool is_prime(uint64_t n);

}  // namespace bertini
