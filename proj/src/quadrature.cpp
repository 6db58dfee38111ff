#include "normlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace normlab {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth, double& err) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, err) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, err);
}

// Nodes and weights of the 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    std::complex<double> value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const std::function<std::complex<double>(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const std::complex<double> fc = f(c);
    std::complex<double> gauss = fc * kWg[3];
    std::complex<double> kron = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const std::complex<double> s = f(c - dx) + f(c + dx);
        kron += kWgk[i] * s;
        if (i % 2 == 1) gauss += kWg[i / 2] * s;
    }
    return Segment{a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double err = 0.0;
    const double value = simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, err);
    return {value, err};
}

ComplexQuadratureResult gauss_kronrod(const std::function<std::complex<double>(double)>& f, double a, double b,
                                      double abs_tol, double rel_tol, int pieces, int max_intervals) {
    ComplexQuadratureResult out;
    if (!(b > a)) return out;
    pieces = std::max(pieces, 1);
    std::priority_queue<Segment> heap;
    const double step = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + step * i;
        const double hi = i + 1 == pieces ? b : a + step * (i + 1);
        heap.push(kronrod(f, lo, hi));
    }
    auto totals = [&] {
        // Summed in a fixed order so the result is reproducible.
        std::vector<Segment> all;
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
        std::complex<double> v = 0;
        double e = 0;
        for (const auto& s : all) {
            v += s.value;
            e += s.error;
        }
        return std::pair{v, e};
    };
    double error = 0;
    std::complex<double> value = 0;
    // Track the running error sum without re-summing every iteration.
    {
        auto [v, e] = totals();
        value = v;
        error = e;
    }
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) && static_cast<int>(heap.size()) < max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Segment l = kronrod(f, worst.a, mid);
        Segment r = kronrod(f, mid, worst.b);
        error += l.error + r.error - worst.error;
        value += l.value + r.value - worst.value;
        heap.push(l);
        heap.push(r);
    }
    auto [v, e] = totals();
    out.value = v;
    out.error_estimate = e;
    out.intervals = static_cast<int>(heap.size());
    return out;
}

}  // namespace normlab
