#pragma once

// Dense complex state tensors, product (Hartree) states, and the seeded
// samplers everything else builds on.
//
// Storage convention, shared by every header in this library: the amplitude
// array holds the hypermatrix A whose entries enter the product-state
// overlap *bilinearly*,
//
//     overlap(t, s) = sum_I A[I] * prod_k factor_k[I_k],
//
// with no conjugation on either side, so <Psi|Psi> is the squared Frobenius
// norm of the stored array. Flat indexing is lexicographic with the last
// mode varying fastest: for dims (2,3), flat position 5 is multi-index (1,2).
//
// All values are immutable after construction; every free function is pure.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hartree {

using cplx = std::complex<double>;

/// Thrown when a desk-scale guard (total dimension, sample budget) is hit.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Index arithmetic (last mode fastest)
// ---------------------------------------------------------------------------

inline std::int64_t dim_product(const std::vector<int>& dims) {
  std::int64_t p = 1;
  for (int d : dims) p *= d;
  return p;
}

inline std::int64_t flatten_index(const std::vector<int>& dims,
                                  const std::vector<int>& idx) {
  if (idx.size() != dims.size())
    throw std::invalid_argument("flatten_index: rank mismatch");
  std::int64_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims[k])
      throw std::invalid_argument("flatten_index: index out of range");
    flat = flat * dims[k] + idx[k];
  }
  return flat;
}

inline std::vector<int> unflatten_index(const std::vector<int>& dims,
                                        std::int64_t flat) {
  std::vector<int> idx(dims.size(), 0);
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
  return idx;
}

/// Advance a multi-index by one step in flat order. Wraps to all-zero.
inline void increment_index(const std::vector<int>& dims, std::vector<int>& idx) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    if (++idx[k] < dims[k]) return;
    idx[k] = 0;
  }
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Mode dimensions d_1,...,d_n of a composite space. Order is accepted as
/// given; nothing here assumes the dims are sorted.
class DimProfile {
 public:
  explicit DimProfile(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2)
      throw std::invalid_argument("DimProfile: need at least two modes");
    for (int d : dims_)
      if (d < 1) throw std::invalid_argument("DimProfile: dims must be >= 1");
  }

  int mode_count() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& dims() const { return dims_; }
  std::int64_t total_size() const { return dim_product(dims_); }

  friend bool operator==(const DimProfile& a, const DimProfile& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
};

/// Product state given by one unit factor vector per mode.
class SeparableState {
 public:
  explicit SeparableState(std::vector<std::vector<cplx>> factors)
      : factors_(std::move(factors)) {
    if (factors_.size() < 2)
      throw std::invalid_argument("SeparableState: need at least two factors");
    for (const auto& f : factors_) {
      if (f.empty())
        throw std::invalid_argument("SeparableState: empty factor");
      double nrm2 = 0.0;
      for (const cplx& c : f) nrm2 += std::norm(c);
      if (std::abs(std::sqrt(nrm2) - 1.0) > 1e-8)
        throw std::invalid_argument("SeparableState: factor is not unit norm");
    }
  }

  int factor_count() const { return static_cast<int>(factors_.size()); }
  const std::vector<cplx>& factor(int k) const {
    return factors_.at(static_cast<std::size_t>(k));
  }
  const std::vector<std::vector<cplx>>& factors() const { return factors_; }

  bool matches(const DimProfile& dims) const {
    if (factor_count() != dims.mode_count()) return false;
    for (int k = 0; k < factor_count(); ++k)
      if (static_cast<int>(factors_[static_cast<std::size_t>(k)].size()) != dims.dim(k))
        return false;
    return true;
  }

 private:
  std::vector<std::vector<cplx>> factors_;
};

/// Dense amplitude hypermatrix over a DimProfile.
class StateTensor {
 public:
  StateTensor(DimProfile dims, std::vector<cplx> amplitudes)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (static_cast<std::int64_t>(amps_.size()) != dims_.total_size())
      throw std::invalid_argument("StateTensor: amplitude count does not match dims");
  }

  const DimProfile& dims() const { return dims_; }
  int mode_count() const { return dims_.mode_count(); }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx at(const std::vector<int>& idx) const {
    return amps_[static_cast<std::size_t>(flatten_index(dims_.dims(), idx))];
  }

 private:
  DimProfile dims_;
  std::vector<cplx> amps_;
};

/// The maximal overlap value lambda* (equals g(z) for unnormalized input).
struct EntanglementEigenvalue {
  double value = 0.0;
};

// ---------------------------------------------------------------------------
// Elementwise arithmetic (value semantics; used by the sigma search and the
// norm-axiom suite)
// ---------------------------------------------------------------------------

inline StateTensor operator*(cplx c, const StateTensor& t) {
  std::vector<cplx> a = t.amplitudes();
  for (cplx& x : a) x *= c;
  return StateTensor(t.dims(), std::move(a));
}

inline StateTensor operator+(const StateTensor& a, const StateTensor& b) {
  if (!(a.dims() == b.dims()))
    throw std::invalid_argument("StateTensor+: shape mismatch");
  std::vector<cplx> s = a.amplitudes();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.amplitudes()[i];
  return StateTensor(a.dims(), std::move(s));
}

inline StateTensor operator-(const StateTensor& a, const StateTensor& b) {
  return a + (cplx(-1.0, 0.0) * b);
}

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

inline double frobenius_norm(const StateTensor& t) {
  double s = 0.0;
  for (const cplx& c : t.amplitudes()) s += std::norm(c);
  return std::sqrt(s);
}

inline StateTensor normalize(const StateTensor& t) {
  const double nrm = frobenius_norm(t);
  if (nrm == 0.0) throw std::invalid_argument("cannot normalize zero state");
  return cplx(1.0 / nrm, 0.0) * t;
}

inline cplx overlap(const StateTensor& t, const SeparableState& s) {
  if (!s.matches(t.dims()))
    throw std::invalid_argument("overlap: state shapes do not match");
  const auto& dims = t.dims().dims();
  const auto& a = t.amplitudes();
  const int n = t.mode_count();
  std::vector<int> idx(dims.size(), 0);
  cplx acc = 0.0;
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(a.size());
       ++flat, increment_index(dims, idx)) {
    cplx prod = a[static_cast<std::size_t>(flat)];
    for (int k = 0; k < n; ++k)
      prod *= s.factor(k)[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    acc += prod;
  }
  return acc;
}

/// Dense tensor representing the product state itself. Under the storage
/// convention the array holds *conjugated* expansion coefficients, so the
/// entry at I is conj(prod_k factor_k[I_k]); this is what makes
/// overlap(separable_to_tensor(s), s) == 1.
inline StateTensor separable_to_tensor(const SeparableState& s) {
  std::vector<int> dims(static_cast<std::size_t>(s.factor_count()));
  for (int k = 0; k < s.factor_count(); ++k)
    dims[static_cast<std::size_t>(k)] = static_cast<int>(s.factor(k).size());
  DimProfile profile(dims);
  std::vector<cplx> a(static_cast<std::size_t>(profile.total_size()));
  std::vector<int> idx(dims.size(), 0);
  for (std::int64_t flat = 0; flat < profile.total_size();
       ++flat, increment_index(dims, idx)) {
    cplx prod = 1.0;
    for (int k = 0; k < s.factor_count(); ++k)
      prod *= s.factor(k)[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    a[static_cast<std::size_t>(flat)] = std::conj(prod);
  }
  return StateTensor(std::move(profile), std::move(a));
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

/// Reproducible Gaussian stream: mt19937_64 plus an explicit Box-Muller
/// transform. std::normal_distribution is implementation-defined, so it is
/// avoided; identical seeds give identical streams on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in (0, 1] with 53-bit resolution.
  double uniform01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double a = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard complex Gaussian: two independent real normals.
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-uniform state on the unit sphere of the full product space:
/// i.i.d. standard complex Gaussian amplitudes, then normalize.
inline StateTensor random_state(const DimProfile& dims, std::uint64_t seed) {
  GaussianSource src(seed);
  std::vector<cplx> a(static_cast<std::size_t>(dims.total_size()));
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (cplx& x : a) x = src.complex_normal();
    for (const cplx& x : a) nrm += std::norm(x);
  }
  const double inv = 1.0 / std::sqrt(nrm);
  for (cplx& x : a) x *= inv;
  return StateTensor(dims, std::move(a));
}

/// Each factor independently uniform on its unit sphere.
inline SeparableState random_separable(const DimProfile& dims, std::uint64_t seed) {
  GaussianSource src(seed);
  std::vector<std::vector<cplx>> factors(static_cast<std::size_t>(dims.mode_count()));
  for (int k = 0; k < dims.mode_count(); ++k) {
    std::vector<cplx> f(static_cast<std::size_t>(dims.dim(k)));
    double nrm = 0.0;
    while (nrm == 0.0) {
      for (cplx& x : f) x = src.complex_normal();
      for (const cplx& x : f) nrm += std::norm(x);
    }
    const double inv = 1.0 / std::sqrt(nrm);
    for (cplx& x : f) x *= inv;
    factors[static_cast<std::size_t>(k)] = std::move(f);
  }
  return SeparableState(std::move(factors));
}

}  // namespace hartree
