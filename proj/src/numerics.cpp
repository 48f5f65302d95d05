#include "uavmac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavmac {

namespace {
constexpr double kInvE = 0.36787944117144232160;  // 1/e
}

double lambert_w0(double x) {
    if (!(x >= -kInvE)) throw std::domain_error("lambert_w0: x < -1/e");
    if (x == 0.0) return 0.0;
    if (x == -kInvE) return -1.0;

    double w;
    if (x < -0.25) {
        // branch-point series in p = sqrt(2(e x + 1))
        const double p = std::sqrt(2.0 * (M_E * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 1.0) {
        // series around 0: W = x - x^2 + 3/2 x^3 - ...
        w = x * (1.0 - x * (1.0 - 1.5 * x));
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= 1e-14 * std::max(std::abs(x), 1e-290)) break;
        const double fp = ew * (w + 1.0);
        const double fpp = ew * (w + 2.0);
        double denom = fp - 0.5 * f * fpp / fp;
        if (denom == 0.0) denom = fp != 0.0 ? fp : 1e-300;
        const double step = f / denom;
        w -= step;
        if (w < -1.0) w = -1.0 + 1e-16;  // stay on the principal branch
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("bisect: lo > hi");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        if (std::abs(flo) <= tol) return lo;
        if (std::abs(fhi) <= tol) return hi;
        throw std::invalid_argument("bisect: no sign change on [lo, hi]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // double resolution exhausted
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    if (panels < 1) throw std::invalid_argument("simpson: panels < 1");
    if (a == b) return 0.0;
    int n = panels;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

GridMaximum cluster_maxima(const std::vector<double>& xs,
                           const std::vector<double>& values,
                           double near_tie_tol, double merge_distance) {
    GridMaximum out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    out.value = *std::max_element(values.begin(), values.end());
    const double cutoff = out.value - near_tie_tol;

    // walk near-tie points in ascending x, merging adjacent runs
    int best_in_run = -1;
    double last_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] < cutoff) continue;
        const bool extends_run =
            best_in_run >= 0 && (xs[i] - last_x) <= merge_distance * 1.000001;
        if (extends_run) {
            if (values[i] > values[best_in_run]) best_in_run = static_cast<int>(i);
        } else {
            if (best_in_run >= 0) {
                out.maximizers.push_back(xs[best_in_run]);
                out.maximizer_values.push_back(values[best_in_run]);
            }
            best_in_run = static_cast<int>(i);
        }
        last_x = xs[i];
    }
    if (best_in_run >= 0) {
        out.maximizers.push_back(xs[best_in_run]);
        out.maximizer_values.push_back(values[best_in_run]);
    }
    return out;
}

GridMaximum grid_search_1d(const std::function<double(double)>& f, double lo,
                           double hi, double step, double near_tie_tol) {
    if (!(lo <= hi)) throw std::invalid_argument("grid_search_1d: lo > hi");
    if (!(step > 0)) throw std::invalid_argument("grid_search_1d: step <= 0");
    int n = static_cast<int>(std::ceil((hi - lo) / step - 1e-12));
    if (n < 1) n = (lo == hi) ? 0 : 1;
    std::vector<double> xs(n + 1), vals(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = (i == n) ? hi : lo + (hi - lo) * i / std::max(n, 1);
        vals[i] = f(xs[i]);
    }
    const double dx = n > 0 ? (hi - lo) / n : 0.0;
    return cluster_maxima(xs, vals, near_tie_tol, dx);
}

}  // namespace uavmac
