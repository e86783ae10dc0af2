#include "axisym/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "axisym/numeric.hpp"

namespace axisym {
namespace {

// Reference rule on [-1, 1].
struct RefRule {
  std::vector<double> t, w, w_low;
};

// Boost stores the nonnegative half of each symmetric rule.
template <class Abs, class Wts>
void unfold(const Abs& abs, const Wts& wts, std::vector<double>& t,
            std::vector<double>& w) {
  for (std::size_t i = abs.size(); i-- > 0;) {
    if (abs[i] == 0.0) continue;
    t.push_back(-abs[i]);
    w.push_back(wts[i]);
  }
  for (std::size_t i = 0; i < abs.size(); ++i) {
    t.push_back(abs[i]);
    w.push_back(wts[i]);
  }
}

RefRule make_kronrod15() {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  RefRule r;
  unfold(K::abscissa(), K::weights(), r.t, r.w);
  std::vector<double> gt, gw;
  unfold(G::abscissa(), G::weights(), gt, gw);
  r.w_low.assign(r.t.size(), 0.0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    auto it = std::find_if(r.t.begin(), r.t.end(),
                           [&](double x) { return std::abs(x - gt[i]) < 1e-14; });
    if (it == r.t.end()) throw std::logic_error("Gauss node missing from Kronrod rule");
    r.w_low[it - r.t.begin()] = gw[i];
  }
  return r;
}

RefRule make_gauss4() {
  using G = boost::math::quadrature::gauss<double, 4>;
  RefRule r;
  unfold(G::abscissa(), G::weights(), r.t, r.w);
  r.w_low = r.w;
  return r;
}

const RefRule& ref_rule(PanelRule rule) {
  static const RefRule k15 = make_kronrod15();
  static const RefRule g4 = make_gauss4();
  return rule == PanelRule::kronrod15 ? k15 : g4;
}

void add_panel(LineRule& out, const RefRule& ref, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < ref.t.size(); ++i) {
    out.x.push_back(c + h * ref.t[i]);
    out.w.push_back(h * ref.w[i]);
    out.w_low.push_back(h * ref.w_low[i]);
  }
}

}  // namespace

LineRule half_line_rule(double fine_width, double fine_end, double far_end,
                        PanelRule rule) {
  if (!(fine_width > 0.0) || !(fine_end > 0.0) || !(far_end >= fine_end))
    throw std::invalid_argument("half_line_rule: bad panel layout");
  const RefRule& ref = ref_rule(rule);
  LineRule out;
  const auto n_fine = static_cast<long>(std::ceil(fine_end / fine_width));
  const double w = fine_end / n_fine;
  for (long i = 0; i < n_fine; ++i) add_panel(out, ref, i * w, (i + 1) * w);
  double a = fine_end;
  double width = w;
  while (a < far_end) {
    width *= 1.5;
    const double b = std::min(far_end, a + width);
    add_panel(out, ref, a, b);
    a = b;
  }
  // Tail: x = a / t, t in (0, 1], dx = a / t^2 dt.
  LineRule tail;
  add_panel(tail, ref, 0.0, 1.0);
  for (std::size_t i = 0; i < tail.x.size(); ++i) {
    const double t = tail.x[i];
    const double jac = a / (t * t);
    out.x.push_back(a / t);
    out.w.push_back(tail.w[i] * jac);
    out.w_low.push_back(tail.w_low[i] * jac);
  }
  return out;
}

LineIntegral apply_rule(const LineRule& rule, const std::vector<double>& v) {
  CompensatedSum hi, lo;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    hi.add(rule.w[i] * v[i]);
    lo.add(rule.w_low[i] * v[i]);
  }
  return {hi.value(), std::abs(hi.value() - lo.value())};
}

}  // namespace axisym
