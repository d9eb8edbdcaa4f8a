#include "compsamp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace compsamp {
namespace {

// 15-point Kronrod abscissae on [-1, 1] (nonnegative half) with Kronrod and embedded
// 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kNodesPerPanel = 15;

struct Panel {
  double a;
  double b;
  std::array<double, 3> moments;  // integrals of w, w x, w x^2 with w = exp(l - shift)
  double error;                   // scaled error estimate used for ordering
};

class Integrator {
 public:
  Integrator(const LogDensity1d& log_density, double lo, double hi, long n_nodes)
      : f_(log_density), lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw std::invalid_argument("quadrature_1d: need finite lo < hi");
    }
    panels_initial_ = std::max(1L, n_nodes / kNodesPerPanel);
    // Rough location of the mode so the weights stay representable.
    shift_ = -std::numeric_limits<double>::infinity();
    const long probes = std::max(64L, n_nodes);
    for (long i = 0; i <= probes; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(probes);
      const double l = f_(x);
      if (std::isnan(l)) throw std::invalid_argument("quadrature_1d: log density is NaN");
      if (l > shift_) {
        shift_ = l;
        mode_ = x;
      }
    }
    if (!std::isfinite(shift_)) {
      throw std::invalid_argument("quadrature_1d: density vanishes on the probe grid");
    }
  }

  void run() {
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (adapt()) return;
    }
    throw std::runtime_error("quadrature_1d: could not stabilize the density scale");
  }

  std::vector<Panel> sorted_panels() const {
    std::vector<Panel> out = panels_;
    std::sort(out.begin(), out.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    return out;
  }

  double shift() const { return shift_; }
  long nodes() const { return nodes_; }

  std::array<double, 3> totals() const {
    std::array<double, 3> t{0.0, 0.0, 0.0};
    for (const Panel& p : panels_) {
      for (int k = 0; k < 3; ++k) t[k] += p.moments[k];
    }
    return t;
  }

  // Gauss-Kronrod moments of one panel; also returns max log density seen.
  std::array<double, 3> integrate(double a, double b, std::array<double, 3>* gauss,
                                  double* max_log) const {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 3> k{0.0, 0.0, 0.0};
    std::array<double, 3> g{0.0, 0.0, 0.0};
    auto accumulate = [&](double x, double wk, double wg) {
      const double l = f_(x);
      if (std::isnan(l)) throw std::invalid_argument("quadrature_1d: log density is NaN");
      if (max_log) *max_log = std::max(*max_log, l);
      const double w = std::exp(l - shift_);
      const double xs = x - center_;
      const std::array<double, 3> v{w, w * xs, w * xs * xs};
      for (int m = 0; m < 3; ++m) {
        k[m] += wk * v[m];
        g[m] += wg * v[m];
      }
    };
    for (int i = 0; i < 7; ++i) {
      const double wg = (i % 2 == 1) ? kWg[static_cast<std::size_t>(i / 2)] : 0.0;
      accumulate(c - h * kXgk[static_cast<std::size_t>(i)], kWgk[static_cast<std::size_t>(i)], wg);
      accumulate(c + h * kXgk[static_cast<std::size_t>(i)], kWgk[static_cast<std::size_t>(i)], wg);
    }
    accumulate(c, kWgk[7], kWg[3]);
    for (int m = 0; m < 3; ++m) {
      k[m] *= h;
      g[m] *= h;
    }
    if (gauss) *gauss = g;
    return k;
  }

 private:
  Panel make_panel(double a, double b, double* max_log) {
    std::array<double, 3> g{};
    Panel p{a, b, integrate(a, b, &g, max_log), 0.0};
    nodes_ += kNodesPerPanel;
    double err = 0.0;
    for (int m = 0; m < 3; ++m) err = std::max(err, std::abs(p.moments[m] - g[m]) * scale_[m]);
    p.error = err;
    return p;
  }

  // Returns false if a density value far above the current shift was found.
  bool adapt() {
    panels_.clear();
    nodes_ = 0;
    center_ = mode_;
    scale_ = {1.0, 1.0 / (hi_ - lo_), 1.0 / ((hi_ - lo_) * (hi_ - lo_))};
    double max_log = -std::numeric_limits<double>::infinity();
    const double width = (hi_ - lo_) / static_cast<double>(panels_initial_);
    for (long i = 0; i < panels_initial_; ++i) {
      const double a = lo_ + width * static_cast<double>(i);
      const double b = i + 1 == panels_initial_ ? hi_ : a + width;
      panels_.push_back(make_panel(a, b, &max_log));
    }
    if (max_log > shift_ + 200.0) {
      shift_ = max_log;
      return false;
    }
    rescale_errors();

    for (;;) {
      double total_error = 0.0;
      for (const Panel& p : panels_) total_error += p.error;
      const double z = std::max(totals_of(panels_)[0], std::numeric_limits<double>::min());
      if (total_error <= kQuadratureRelTol * z) return true;
      // Split the worst eighth of panels (at least one) per sweep.
      const std::size_t split = std::max<std::size_t>(1, panels_.size() / 8);
      if (nodes_ + static_cast<long>(2 * split) * kNodesPerPanel > kMaxQuadratureNodes) {
        throw std::runtime_error("quadrature_1d: no convergence within 2^20 nodes");
      }
      std::partial_sort(panels_.begin(), panels_.begin() + static_cast<std::ptrdiff_t>(split),
                        panels_.end(),
                        [](const Panel& p, const Panel& q) { return p.error > q.error; });
      std::vector<Panel> next;
      next.reserve(panels_.size() + split);
      for (std::size_t i = 0; i < panels_.size(); ++i) {
        const Panel& p = panels_[i];
        if (i < split) {
          const double mid = 0.5 * (p.a + p.b);
          next.push_back(make_panel(p.a, mid, &max_log));
          next.push_back(make_panel(mid, p.b, &max_log));
        } else {
          next.push_back(p);
        }
      }
      panels_ = std::move(next);
      if (max_log > shift_ + 200.0) {
        shift_ = max_log;
        return false;
      }
    }
  }

  static std::array<double, 3> totals_of(const std::vector<Panel>& panels) {
    std::array<double, 3> t{0.0, 0.0, 0.0};
    for (const Panel& p : panels) {
      for (int k = 0; k < 3; ++k) t[k] += std::abs(p.moments[k]);
    }
    return t;
  }

  void rescale_errors() {
    // Express moment errors in units of the normalizer so one tolerance covers all three.
    const auto t = totals_of(panels_);
    const double z = std::max(t[0], std::numeric_limits<double>::min());
    scale_ = {1.0, t[1] > 0.0 ? z / t[1] : 1.0, t[2] > 0.0 ? z / t[2] : 1.0};
    for (Panel& p : panels_) {
      std::array<double, 3> g{};
      integrate(p.a, p.b, &g, nullptr);
      double err = 0.0;
      for (int m = 0; m < 3; ++m) err = std::max(err, std::abs(p.moments[m] - g[m]) * scale_[m]);
      p.error = err;
    }
  }

  const LogDensity1d& f_;
  double lo_;
  double hi_;
  long panels_initial_ = 1;
  double shift_ = 0.0;
  double center_ = 0.0;
  double mode_ = 0.0;  // moments are accumulated about this point
  std::array<double, 3> scale_{1.0, 1.0, 1.0};
  long nodes_ = 0;
  std::vector<Panel> panels_;

 public:
  double center() const { return center_; }
};

QuadratureResult summarize(const Integrator& integ) {
  const auto t = integ.totals();
  if (!(t[0] > 0.0)) throw std::runtime_error("quadrature_1d: density integrates to zero");
  QuadratureResult r;
  r.log_z = std::log(t[0]) + integ.shift();
  const double m1 = t[1] / t[0];
  r.mean = integ.center() + m1;
  r.variance = std::max(0.0, t[2] / t[0] - m1 * m1);
  r.nodes_used = integ.nodes();
  return r;
}

}  // namespace

QuadratureResult quadrature_1d(const LogDensity1d& log_density, double lo, double hi,
                               long n_nodes) {
  Integrator integ(log_density, lo, hi, n_nodes);
  integ.run();
  return summarize(integ);
}

QuadratureCdf::QuadratureCdf(LogDensity1d log_density, double lo, double hi, long n_nodes)
    : log_density_(std::move(log_density)), shift_(0.0), z_(0.0) {
  Integrator integ(log_density_, lo, hi, n_nodes);
  integ.run();
  summary_ = summarize(integ);
  shift_ = integ.shift();
  const std::vector<Panel> panels = integ.sorted_panels();
  edges_.reserve(panels.size() + 1);
  cumulative_.reserve(panels.size() + 1);
  double acc = 0.0;
  edges_.push_back(panels.front().a);
  cumulative_.push_back(0.0);
  for (const Panel& p : panels) {
    acc += p.moments[0];
    edges_.push_back(p.b);
    cumulative_.push_back(acc);
  }
  z_ = acc;
}

double QuadratureCdf::operator()(double x) const {
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return 1.0;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  const double a = edges_[i];
  double partial = 0.0;
  if (x > a) {
    // One Kronrod panel on [a, x] is far finer than the KS resolution.
    const double c = 0.5 * (a + x);
    const double h = 0.5 * (x - a);
    for (int k = 0; k < 7; ++k) {
      const double w = kWgk[static_cast<std::size_t>(k)];
      partial += w * std::exp(log_density_(c - h * kXgk[static_cast<std::size_t>(k)]) - shift_);
      partial += w * std::exp(log_density_(c + h * kXgk[static_cast<std::size_t>(k)]) - shift_);
    }
    partial += kWgk[7] * std::exp(log_density_(c) - shift_);
    partial *= h;
  }
  return std::clamp((cumulative_[i] + partial) / z_, 0.0, 1.0);
}

}  // namespace compsamp
