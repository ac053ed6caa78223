// Smoothness of complete intersections cut out on an ambient variety
// (projective space or a smooth hypersurface) by tuples of forms.
//
// Two independent oracles decide whether the scheme Y = X intersect
// V(f_1, ..., f_k) is smooth of dimension dim X - k:
//  - is_smooth_gb: exact, over the algebraic closure. Chart by chart it
//    forms the ideal of the forms (plus the hypersurface equation) together
//    with all maximal minors of the homogeneous Jacobian, dehomogenizes,
//    and asks Buchberger whether the ideal is trivial. Y is smooth iff the
//    singular locus is empty on every chart. For k = dim X + 1 the rank can
//    never be full at a point of Y, so smooth means empty, which the same
//    ideal computation decides.
//  - is_smooth_brute: scans all points of P^n over extensions of degree at
//    most E and tests the Jacobian rank at each; sound for refutation, and
//    complete once E reaches the residue degrees that can carry a singular
//    point.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bertini/groebner.hpp"
#include "bertini/mpoly.hpp"

namespace bertini {

// Point of P^n over an extension field, scaled so the first nonzero
// coordinate is 1. degree = least e' with all coordinates in F_{q^e'},
// where q is the base field of the ambient variety it came from.
struct ProjPoint {
  FieldPtr field;
  std::vector<uint32_t> coords;
  int degree = 1;
};

class Variety {
 public:
  static Variety projective_space(FieldPtr field, int n);
  // Validates that g is nonzero of degree >= 1 and cuts a smooth
  // hypersurface in P^n, n >= 2.
  static Variety hypersurface(Form g, uint64_t gb_budget = 200000);

  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }                  // ambient P^n
  int dim() const { return g_ ? n_ - 1 : n_; }  // m
  int deg_closure() const { return g_ ? g_->degree() : 1; }
  bool is_hypersurface() const { return g_.has_value(); }
  const Form& section() const;  // throws unless hypersurface

  // Membership of a point over the base field or an extension of it.
  bool contains(const ProjPoint& pt) const;

 private:
  Variety(FieldPtr field, int n, std::optional<Form> g);
  FieldPtr field_;
  int n_ = 0;
  std::optional<Form> g_;
};

struct SmoothnessVerdict {
  bool smooth = false;
  // Singular point found by the brute oracle (none from the Groebner one).
  std::optional<ProjPoint> witness;
  enum class Method { Groebner, Brute } method = Method::Groebner;
  int scanned_degree = 0;  // E for the brute oracle
};

// (q^(n+1) - 1) / (q - 1)
uint64_t projective_point_count(uint64_t q, int n);

// Visits every point of P^n(field) exactly once in canonical order: the
// position of the leading 1 ascends, and for each position the later
// coordinates run through the field's code order, rightmost fastest.
// Return false from the visitor to stop early.
void for_each_projective_point(
    int n, const FieldPtr& field,
    const std::function<bool(const std::vector<uint32_t>&)>& visit);

// Least e' dividing e with all coordinates in the degree-(base_degree * e')
// subfield, where the point's field is F_{p^(base_degree * e)}.
int point_degree(const Field& field, const std::vector<uint32_t>& coords,
                 uint32_t base_degree);

// Canonical representative: coordinates scaled by the inverse of the first
// nonzero one.
std::vector<uint32_t> normalize_projective(const Field& field,
                                           std::vector<uint32_t> coords);

// Rank of a matrix over the given field by Gaussian elimination.
int matrix_rank(const Field& field, std::vector<std::vector<uint32_t>> mat);

// Smoothness of Y = X intersect V(t) at one point of X (possibly over an
// extension). True when the point is off Y, or on Y with full Jacobian rank.
bool is_smooth_at_point(const FormTuple& t, const Variety& X,
                        const ProjPoint& pt);

// Exact global verdict; throws BudgetExhausted when Buchberger runs out.
SmoothnessVerdict is_smooth_gb(const FormTuple& t, const Variety& X,
                               uint64_t pair_budget = 200000);

// Scan extensions 1..max_extension (clamped to >= 1) for singular points.
SmoothnessVerdict is_smooth_brute(const FormTuple& t, const Variety& X,
                                  int max_extension);

// Number of points of X(F_{q^e}) where every listed form vanishes.
uint64_t count_points(const Variety& X, const std::vector<Form>& sections,
                      int e, uint64_t max_points = uint64_t{1} << 26);
uint64_t count_points(const FormTuple& t, const Variety& X, int e,
                      uint64_t max_points = uint64_t{1} << 26);

// y is a rational point of X. True when every form vanishes at y and Y is
// smooth at y (the intersection passes through y transversally).
bool contains_with_transversality(const FormTuple& t, const Variety& X,
                                  const ProjPoint& y);
// True when some form is nonzero at z, i.e. Y misses z.
bool avoids(const FormTuple& t, const Variety& X, const ProjPoint& z);

// Bulk brute verdicts for every degree-d hypersurface on P^n over F_2
// (n <= 2): flags[i] = 1 iff form i in FormEnumeration order has a singular
// point over some F_{2^e}, e <= max_extension (<= 16). One pass per point:
// the values of (f, df/dx_0, ..., df/dx_n) are packed into 16-bit lanes of
// a uint64 and a Gray-code walk over coefficient masks updates them with a
// single XOR per form.
std::vector<uint8_t> brute_singular_flags_f2(int n, int d, int max_extension);

}  // namespace bertini
