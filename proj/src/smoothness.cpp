#include "bertini/smoothness.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bertini {

// ---- Variety ----

Variety::Variety(FieldPtr field, int n, std::optional<Form> g)
    : field_(std::move(field)), n_(n), g_(std::move(g)) {}

Variety Variety::projective_space(FieldPtr field, int n) {
  if (!field) throw std::invalid_argument("variety: null field");
  if (n < 1 || n + 1 > Monomial::kMaxVars)
    throw std::invalid_argument("variety: ambient dimension out of range");
  return Variety(std::move(field), n, std::nullopt);
}

Variety Variety::hypersurface(Form g, uint64_t gb_budget) {
  if (g.is_zero() || g.degree() < 1)
    throw std::invalid_argument("variety: hypersurface needs a nonzero form of degree >= 1");
  const int n = g.nvars() - 1;
  if (n < 2)
    throw std::invalid_argument("variety: hypersurface ambient must be at least P^2");
  Variety ambient = projective_space(g.field(), n);
  const auto verdict = is_smooth_gb(FormTuple({g}), ambient, gb_budget);
  if (!verdict.smooth)
    throw std::invalid_argument("variety: hypersurface section is singular");
  FieldPtr field = g.field();
  return Variety(std::move(field), n, std::move(g));
}

const Form& Variety::section() const {
  if (!g_) throw std::domain_error("variety: projective space has no section");
  return *g_;
}

bool Variety::contains(const ProjPoint& pt) const {
  if (!g_) return true;
  const Embedding emb(field_, pt.field);
  return g_->evaluate(pt.coords, emb) == 0;
}

// ---- point enumeration ----

uint64_t projective_point_count(uint64_t q, int n) {
  unsigned __int128 total = 0, qe = 1;
  for (int i = 0; i <= n; ++i) {
    total += qe;
    qe *= q;
    if (total > (unsigned __int128)UINT64_MAX)
      throw std::overflow_error("projective_point_count: overflow");
  }
  return uint64_t(total);
}

void for_each_projective_point(
    int n, const FieldPtr& field,
    const std::function<bool(const std::vector<uint32_t>&)>& visit) {
  const uint64_t q = field->size();
  std::vector<uint32_t> coords(n + 1, 0);
  for (int lead = 0; lead <= n; ++lead) {
    std::fill(coords.begin(), coords.end(), 0);
    coords[lead] = 1;
    const int free = n - lead;
    uint64_t total = 1;
    for (int i = 0; i < free; ++i) total *= q;
    for (uint64_t idx = 0; idx < total; ++idx) {
      uint64_t v = idx;
      // Rightmost coordinate fastest.
      for (int i = n; i > lead; --i) {
        coords[i] = uint32_t(v % q);
        v /= q;
      }
      if (!visit(coords)) return;
    }
  }
}

int point_degree(const Field& field, const std::vector<uint32_t>& coords,
                 uint32_t base_degree) {
  if (field.degree() % base_degree)
    throw std::invalid_argument("point_degree: field is not an extension of the base");
  const uint32_t e = field.degree() / base_degree;
  for (uint32_t cand = 1; cand <= e; ++cand) {
    if (e % cand) continue;
    uint64_t pt = 1;
    for (uint32_t i = 0; i < base_degree * cand; ++i) pt *= field.characteristic();
    bool all = true;
    for (uint32_t c : coords) {
      if (field.pow(c, pt) != c) {
        all = false;
        break;
      }
    }
    if (all) return int(cand);
  }
  throw std::logic_error("point_degree: unreachable");
}

std::vector<uint32_t> normalize_projective(const Field& field,
                                           std::vector<uint32_t> coords) {
  for (uint32_t c : coords) {
    if (c) {
      const uint32_t s = field.inv(c);
      for (uint32_t& x : coords) x = field.mul(x, s);
      return coords;
    }
  }
  throw std::invalid_argument("projective point: all coordinates zero");
}

int matrix_rank(const Field& field, std::vector<std::vector<uint32_t>> mat) {
  if (mat.empty()) return 0;
  const size_t rows = mat.size(), cols = mat[0].size();
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && mat[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(mat[rank], mat[pivot]);
    const uint32_t inv = field.inv(mat[rank][col]);
    for (size_t r = rank + 1; r < rows; ++r) {
      if (mat[r][col] == 0) continue;
      const uint32_t factor = field.mul(mat[r][col], inv);
      for (size_t c = col; c < cols; ++c)
        mat[r][c] = field.sub(mat[r][c], field.mul(factor, mat[rank][c]));
    }
    ++rank;
  }
  return int(rank);
}

// ---- oracles ----

namespace {

void check_tuple(const FormTuple& t, const Variety& X) {
  if (!t.field()->same(*X.field()))
    throw std::invalid_argument("smoothness: tuple and variety fields differ");
  if (t.nvars() != X.n() + 1)
    throw std::invalid_argument("smoothness: tuple has wrong variable count");
  if (t.k() < 1 || t.k() > X.dim() + 1)
    throw std::invalid_argument("smoothness: need 1 <= k <= dim X + 1");
}

// Determinant of a square matrix of polynomials by Laplace expansion along
// the first row. Sizes here are tiny (at most 4).
Polynomial poly_det(const std::vector<std::vector<Polynomial>>& mat,
                    std::vector<int> cols, size_t row) {
  const FieldPtr field = mat[0][0].field();
  const int nvars = mat[0][0].nvars();
  if (cols.size() == 1) return mat[row][cols[0]];
  Polynomial det(field, nvars);
  for (size_t idx = 0; idx < cols.size(); ++idx) {
    const Polynomial& entry = mat[row][cols[idx]];
    if (entry.is_zero()) continue;
    std::vector<int> rest;
    for (size_t j = 0; j < cols.size(); ++j)
      if (j != idx) rest.push_back(cols[j]);
    Polynomial minor = poly_det(mat, std::move(rest), row + 1);
    Polynomial signed_entry =
        (idx % 2) ? entry.scaled(field->neg(1)) : entry;
    det = det + signed_entry * minor;
  }
  return det;
}

// All rows of the augmented system (forms plus hypersurface section) and
// the polynomial Jacobian matrix, over the homogeneous coordinate ring.
struct System {
  std::vector<Polynomial> equations;           // f_1..f_k (+ g)
  std::vector<std::vector<Polynomial>> jac;    // (k (+1)) x (n+1)
};

System build_system(const FormTuple& t, const Variety& X) {
  System sys;
  for (const Form& f : t.forms) sys.equations.push_back(f.poly());
  std::vector<Form> rows = t.forms;
  if (X.is_hypersurface()) {
    sys.equations.push_back(X.section().poly());
    rows.push_back(X.section());
  }
  for (const Form& f : rows) {
    std::vector<Polynomial> jrow;
    for (int j = 0; j <= X.n(); ++j) jrow.push_back(f.derivative(j).poly());
    sys.jac.push_back(std::move(jrow));
  }
  return sys;
}

void column_subsets(int n, int k, std::vector<int>& cur,
                    const std::function<void(const std::vector<int>&)>& emit,
                    int start = 0) {
  if (int(cur.size()) == k) {
    emit(cur);
    return;
  }
  // Need (k - |cur|) more columns from {c..n}, so c can be at most
  // n - (k - |cur|) + 1.
  for (int c = start; c <= n - (k - int(cur.size())) + 1; ++c) {
    cur.push_back(c);
    column_subsets(n, k, cur, emit, c + 1);
    cur.pop_back();
  }
}

}  // namespace

bool is_smooth_at_point(const FormTuple& t, const Variety& X,
                        const ProjPoint& pt) {
  check_tuple(t, X);
  if (!X.contains(pt))
    throw std::invalid_argument("smoothness: point is not on the variety");
  const Embedding emb(X.field(), pt.field);
  bool on_intersection = true;
  for (const Form& f : t.forms) {
    if (f.evaluate(pt.coords, emb) != 0) {
      on_intersection = false;
      break;
    }
  }
  if (!on_intersection) return true;
  System sys = build_system(t, X);
  std::vector<std::vector<uint32_t>> J;
  for (const auto& row : sys.jac) {
    std::vector<uint32_t> vals;
    for (const Polynomial& entry : row)
      vals.push_back(entry.evaluate(pt.coords, emb));
    J.push_back(std::move(vals));
  }
  return matrix_rank(*pt.field, std::move(J)) == int(sys.jac.size());
}

SmoothnessVerdict is_smooth_gb(const FormTuple& t, const Variety& X,
                               uint64_t pair_budget) {
  check_tuple(t, X);
  SmoothnessVerdict v;
  v.method = SmoothnessVerdict::Method::Groebner;
  System sys = build_system(t, X);
  const int rows = int(sys.jac.size());
  const int n = X.n();

  // Maximal minors of the Jacobian; for rows > n + 1 there are none and the
  // singular locus is cut out by the equations alone.
  std::vector<Polynomial> minors;
  if (rows <= n + 1) {
    std::vector<int> cur;
    column_subsets(n, rows, cur, [&](const std::vector<int>& cols) {
      Polynomial det = poly_det(sys.jac, cols, 0);
      if (!det.is_zero()) minors.push_back(std::move(det));
    });
  }

  for (int chart = 0; chart <= n; ++chart) {
    std::vector<Polynomial> gens;
    for (const Polynomial& eq : sys.equations)
      gens.push_back(eq.dehomogenize_at(chart));
    for (const Polynomial& mn : minors)
      gens.push_back(mn.dehomogenize_at(chart));
    if (!ideal_is_trivial(gens, pair_budget)) return v;  // smooth = false
  }
  v.smooth = true;
  return v;
}

SmoothnessVerdict is_smooth_brute(const FormTuple& t, const Variety& X,
                                  int max_extension) {
  check_tuple(t, X);
  SmoothnessVerdict v;
  v.method = SmoothnessVerdict::Method::Brute;
  const int E = std::max(1, max_extension);
  v.scanned_degree = E;
  const FieldPtr base = X.field();
  const System sys = build_system(t, X);
  for (int e = 1; e <= E; ++e) {
    const FieldPtr Fe = Field::create(base->characteristic(),
                                      base->degree() * uint32_t(e));
    const Embedding emb(base, Fe);
    std::optional<ProjPoint> witness;
    for_each_projective_point(X.n(), Fe, [&](const std::vector<uint32_t>& pt) {
      for (const Polynomial& eq : sys.equations) {
        if (eq.evaluate(pt, emb) != 0) return true;  // off Y, keep going
      }
      std::vector<std::vector<uint32_t>> J;
      for (const auto& row : sys.jac) {
        std::vector<uint32_t> vals;
        for (const Polynomial& entry : row)
          vals.push_back(entry.evaluate(pt, emb));
        J.push_back(std::move(vals));
      }
      if (matrix_rank(*Fe, std::move(J)) == int(sys.jac.size())) return true;
      ProjPoint w;
      w.field = Fe;
      w.coords = pt;
      w.degree = point_degree(*Fe, pt, base->degree());
      witness = std::move(w);
      return false;  // stop at the first singular point
    });
    if (witness) {
      // Only report witnesses of exact degree e; points of smaller degree
      // were already cleared in earlier rounds, so this one is new.
      v.smooth = false;
      v.witness = std::move(witness);
      return v;
    }
  }
  v.smooth = true;
  return v;
}

uint64_t count_points(const Variety& X, const std::vector<Form>& sections,
                      int e, uint64_t max_points) {
  if (e < 1) throw std::invalid_argument("count_points: extension must be >= 1");
  const FieldPtr base = X.field();
  const FieldPtr Fe =
      Field::create(base->characteristic(), base->degree() * uint32_t(e));
  const uint64_t total = projective_point_count(Fe->size(), X.n());
  if (total > max_points)
    throw std::invalid_argument("count_points: enumeration larger than the configured bound");
  const Embedding emb(base, Fe);
  std::vector<Polynomial> eqs;
  if (X.is_hypersurface()) eqs.push_back(X.section().poly());
  for (const Form& f : sections) {
    if (!f.field()->same(*base) || f.nvars() != X.n() + 1)
      throw std::invalid_argument("count_points: section/variety mismatch");
    eqs.push_back(f.poly());
  }
  uint64_t count = 0;
  for_each_projective_point(X.n(), Fe, [&](const std::vector<uint32_t>& pt) {
    for (const Polynomial& eq : eqs) {
      if (eq.evaluate(pt, emb) != 0) return true;
    }
    ++count;
    return true;
  });
  return count;
}

uint64_t count_points(const FormTuple& t, const Variety& X, int e,
                      uint64_t max_points) {
  check_tuple(t, X);
  return count_points(X, t.forms, e, max_points);
}

bool contains_with_transversality(const FormTuple& t, const Variety& X,
                                  const ProjPoint& y) {
  check_tuple(t, X);
  const Embedding emb(X.field(), y.field);
  for (const Form& f : t.forms) {
    if (f.evaluate(y.coords, emb) != 0) return false;
  }
  return is_smooth_at_point(t, X, y);
}

bool avoids(const FormTuple& t, const Variety& X, const ProjPoint& z) {
  check_tuple(t, X);
  const Embedding emb(X.field(), z.field);
  for (const Form& f : t.forms) {
    if (f.evaluate(z.coords, emb) != 0) return true;
  }
  return false;
}

// ---- bulk brute oracle over F_2 ----

std::vector<uint8_t> brute_singular_flags_f2(int n, int d, int max_extension) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("bulk brute oracle: only P^1 and P^2");
  if (d < 1) throw std::invalid_argument("bulk brute oracle: degree >= 1");
  const int E = std::max(1, std::min(max_extension, 16));
  const FieldPtr base = Field::create(2, 1);
  const auto mons = monomials_of_degree(n + 1, d);
  const int M = int(mons.size());
  if (M > 26) throw std::invalid_argument("bulk brute oracle: too many monomials");
  const uint64_t nforms = uint64_t{1} << M;

  std::vector<uint8_t> flags(nforms, 0);
  flags[0] = 1;  // the zero form is singular everywhere
  std::vector<uint64_t> contrib(M);

  for (int e = 1; e <= E; ++e) {
    const FieldPtr Fe = Field::create(2, uint32_t(e));
    const Field& F = *Fe;
    for_each_projective_point(n, Fe, [&](const std::vector<uint32_t>& pt) {
      // Lane 0: value of the monomial; lane j+1: value of its x_j partial.
      for (int j = 0; j < M; ++j) {
        const Monomial m = mons[j];
        uint64_t packed = 0;
        uint32_t val = 1;
        for (int v = 0; v <= n; ++v) {
          const int ev = m.exponent(v);
          if (ev) val = F.mul(val, F.pow(pt[v], uint64_t(ev)));
        }
        packed = val;
        for (int v = 0; v <= n; ++v) {
          const int ev = m.exponent(v);
          uint32_t dval = 0;
          if (ev & 1) {  // char 2: d/dx x^e = (e mod 2) x^(e-1)
            dval = 1;
            for (int w = 0; w <= n; ++w) {
              const int ew = m.exponent(w) - (w == v ? 1 : 0);
              if (ew) dval = F.mul(dval, F.pow(pt[w], uint64_t(ew)));
            }
          }
          packed |= uint64_t(dval) << (16 * (v + 1));
        }
        contrib[j] = packed;
      }
      // Gray-code walk: mask(t) = t ^ (t >> 1) differs from mask(t-1) in
      // exactly bit countr_zero(t).
      uint64_t cur = 0;
      for (uint64_t t = 1; t < nforms; ++t) {
        cur ^= contrib[std::countr_zero(t)];
        if (cur == 0) flags[t ^ (t >> 1)] = 1;
      }
      return true;
    });
  }
  return flags;
}

}  // namespace bertini
