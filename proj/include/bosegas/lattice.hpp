#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Small integer-lattice utilities shared by the torus modules.
namespace bosegas::lattice {

// Number of integer lattice vectors with |q|^2 = m, for m = 0..m_max.
inline std::vector<long> shell_counts(int m_max) {
  std::vector<long> counts(static_cast<std::size_t>(m_max) + 1, 0);
  const int nmax = static_cast<int>(std::ceil(std::sqrt(double(m_max))));
  for (int x = -nmax; x <= nmax; ++x)
    for (int y = -nmax; y <= nmax; ++y)
      for (int z = -nmax; z <= nmax; ++z) {
        const long m = static_cast<long>(x) * x + static_cast<long>(y) * y +
                       static_cast<long>(z) * z;
        if (m <= m_max) ++counts[static_cast<std::size_t>(m)];
      }
  return counts;
}

}  // namespace bosegas::lattice
