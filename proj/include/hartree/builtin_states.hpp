#pragma once

// Well-known reference states used by the CLI and the test suites.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hartree/state.hpp"

namespace hartree {

/// (|00> + |11>) / sqrt(2) on dims (2,2).
inline StateTensor make_bell() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateTensor(DimProfile({2, 2}), {cplx(r), cplx(0), cplx(0), cplx(r)});
}

/// (|0...0> + |1...1>) / sqrt(2) on `parties` qubits.
inline StateTensor make_ghz(int parties) {
  if (parties < 2) throw std::invalid_argument("make_ghz: need >= 2 parties");
  DimProfile dims(std::vector<int>(static_cast<std::size_t>(parties), 2));
  std::vector<cplx> a(static_cast<std::size_t>(dims.total_size()), cplx(0));
  const double r = 1.0 / std::sqrt(2.0);
  a.front() = cplx(r);
  a.back() = cplx(r);
  return StateTensor(std::move(dims), std::move(a));
}

/// Equal superposition of all weight-one basis states on `parties` qubits.
inline StateTensor make_w(int parties) {
  if (parties < 2) throw std::invalid_argument("make_w: need >= 2 parties");
  DimProfile dims(std::vector<int>(static_cast<std::size_t>(parties), 2));
  std::vector<cplx> a(static_cast<std::size_t>(dims.total_size()), cplx(0));
  const double r = 1.0 / std::sqrt(static_cast<double>(parties));
  for (int k = 0; k < parties; ++k)
    a[static_cast<std::size_t>(1) << k] = cplx(r);
  return StateTensor(std::move(dims), std::move(a));
}

}  // namespace hartree
