#pragma once

#include <vector>

namespace axisym {

enum class PanelRule { kronrod15, gauss4 };

/// Nodes and weights for \int_0^\infty f(x) dx.
/// Panels: uniform of width <= fine_width on [0, fine_end], then widths
/// growing by 1.5 per panel up to far_end, and x = far_end / t on the tail
/// (exact for f ~ x^-2, smooth in t for any algebraic decay).
/// With kronrod15 the embedded 7-point Gauss weights are kept in w_low,
/// so |sum (w - w_low) f| estimates the error.
struct LineRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> w_low;
};

LineRule half_line_rule(double fine_width, double fine_end, double far_end,
                        PanelRule rule);

struct LineIntegral {
  double value = 0.0;
  double error = 0.0;  // 0 for rules without an embedded estimate
};

/// sum w_i v_i with the error estimate when available.
LineIntegral apply_rule(const LineRule& rule, const std::vector<double>& v);

}  // namespace axisym
