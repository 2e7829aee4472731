// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_CLI_SVG_HPP
#define BALLISTIC_CLI_SVG_HPP

#include <cstddef>
#include <string>

namespace bcli {

struct SvgOptions {
  double horizon = 0.0;          // 0: last collision time * 1.05 (or 1 if none)
  std::size_t max_particles = 100000;  // uniform index thinning beyond this
  double v_max = 1.0;            // color scale for continuous laws
  bool discrete_three = true;    // three fixed class colors instead of a gradient
};

/// Space-time diagram: one line segment per particle from (x, 0) to its
/// death point, or to the horizon if alive. Space runs horizontally, time
/// increases upward. Byte output is deterministic for fixed inputs.
std::string render_svg(const double* positions, const double* speeds, const double* death_times,
                       const double* death_positions, std::size_t n, const SvgOptions& options,
                       std::size_t* drawn_out);

}  // namespace bcli

#endif
