#include "hyperwave/admissibility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace hyperwave {

// ---------------------------------------------------------------- Real

Real Real::exact(long long num, long long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    return Real(Rational(num) / Rational(den));
}

Real Real::approx(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite real");
    return Real(value);
}

Real Real::exact_from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite real");
    return Real(Rational(value));
}

Real Real::parse(std::string_view text) {
    static const std::regex fraction(R"(^\s*([+-]?\d+)\s*/\s*(\d+)\s*$)");
    static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
    const std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, fraction)) {
        const boost::multiprecision::cpp_int den(m[2].str());
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return Real(Rational(boost::multiprecision::cpp_int(m[1].str())) / Rational(den));
    }
    if (std::regex_match(s, m, decimal) && (m[2].length() > 0 || m[3].length() > 0)) {
        std::string digits = m[2].str() + m[3].str();
        // cpp_int reads a leading zero as an octal prefix
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
        Rational value{boost::multiprecision::cpp_int(digits.empty() ? "0" : digits)};
        long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
        exponent -= static_cast<long>(m[3].length());
        if (std::labs(exponent) > 400) throw std::invalid_argument("exponent out of range in '" + s + "'");
        const Rational scale(boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(std::labs(exponent))));
        if (exponent > 0) {
            value *= scale;
        } else {
            value /= scale;
        }
        if (m[1].str() == "-") value = -value;
        return Real(value);
    }
    throw std::invalid_argument("cannot parse '" + s + "' as a real number");
}

double Real::to_double() const {
    if (const auto* r = std::get_if<Rational>(&value_)) return r->convert_to<double>();
    return std::get<double>(value_);
}

std::string Real::str() const {
    if (const auto* r = std::get_if<Rational>(&value_)) return r->str();
    std::ostringstream out;
    out.precision(17);
    out << std::get<double>(value_);
    return out.str();
}

namespace {

template <class Op>
Real combine(const Real& a, const Real& b, Op op) {
    if (a.is_exact() && b.is_exact()) return Real(Rational(op(*a.rational(), *b.rational())));
    return Real::approx(op(a.to_double(), b.to_double()));
}

}  // namespace

Real operator+(const Real& a, const Real& b) { return combine(a, b, std::plus<>{}); }
Real operator-(const Real& a, const Real& b) { return combine(a, b, std::minus<>{}); }
Real operator*(const Real& a, const Real& b) { return combine(a, b, std::multiplies<>{}); }
Real operator/(const Real& a, const Real& b) {
    if (b.is_exact() ? *b.rational() == 0 : b.to_double() == 0.0) throw std::domain_error("division by zero");
    return combine(a, b, std::divides<>{});
}
Real operator-(const Real& a) { return Real(0) - a; }

bool at_least(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) return *a.rational() >= *b.rational();
    return a.to_double() - b.to_double() >= -kComparisonBand;
}

bool greater(const Real& a, const Real& b) {
    if (a.is_exact() && b.is_exact()) return *a.rational() > *b.rational();
    return a.to_double() - b.to_double() > kComparisonBand;
}

}  // namespace hyperwave

namespace hyperwave {

void Verdict::fail(std::string what) {
    ok = false;
    failed.push_back(std::move(what));
}

namespace {

void require_dimension_range(int n) {
    if (n < kMinAdmissibleDimension || n > kMaxAdmissibleDimension) {
        throw std::invalid_argument("dimension must lie in [2, 6]");
    }
}

void require_sigma(const Real& sigma) {
    if (!greater(sigma, 0) || !greater(1, sigma)) throw std::invalid_argument("sigma must lie in (0, 1)");
}

const Real kHalf = Real::exact(1, 2);

// lhs >= rhs, or lhs > rhs when strict.
bool holds(const Real& lhs, const Real& rhs, bool strict) { return strict ? greater(lhs, rhs) : at_least(lhs, rhs); }

}  // namespace

PairQuery PairQuery::from_exponents(const Real& p1, const Real& q1, int n, const Real& sigma, std::optional<Real> p,
                                    bool open_flag) {
    PairQuery q;
    q.inv_p1 = Real(1) / p1;
    q.inv_q1 = Real(1) / q1;
    q.n = n;
    q.sigma = sigma;
    q.p = std::move(p);
    q.open_flag = open_flag;
    return q;
}

Real beta(const Real& q, int n) {
    if (!at_least(q, 2)) throw std::invalid_argument("beta needs q >= 2");
    return Real(n + 1) / Real(2) * (kHalf - Real(1) / q);
}

Verdict is_sigma_admissible(const PairQuery& q) {
    require_dimension_range(q.n);
    require_sigma(q.sigma);
    const int n = q.n;
    const Real& x = q.inv_p1;
    const Real& y = q.inv_q1;
    Verdict v;
    if (!greater(x, 0) || !at_least(kHalf, x) || !greater(y, 0) || !greater(kHalf, y)) v.fail("box");
    if (!holds(x + Real(n) * y, Real(n) / Real(2) - q.sigma, n == 2 || q.open_flag)) v.fail("scaling_line");
    if (!holds(y, kHalf - Real(2) * q.sigma / Real(n + 1), q.open_flag)) v.fail("inv_q_cap");
    return v;
}

Verdict is_control(const PairQuery& q) {
    require_dimension_range(q.n);
    require_sigma(q.sigma);
    if (!q.p) throw std::invalid_argument("control queries need the exponent p");
    const Real& p = *q.p;
    if (!greater(p, 1)) throw std::invalid_argument("p must exceed 1");
    const int n = q.n;
    const Real x2 = Real(1) - p * q.inv_p1;
    const Real y2 = Real(1) - p * q.inv_q1;
    Verdict v;
    if (!greater(x2, 0) || !at_least(kHalf, x2) || !greater(y2, 0) || !greater(kHalf, y2)) v.fail("dual box");
    if (!holds(x2 + Real(n) * y2, Real(n) / Real(2) - Real(1) + q.sigma, n == 2)) v.fail("dual_scaling_line");
    if (!at_least(y2, Real(n - 3) / Real(2 * (n + 1)) + Real(2) * q.sigma / Real(n + 1))) v.fail("dual_inv_q_floor");
    return v;
}

Verdict is_compatible(const PairQuery& q) {
    Verdict v = is_sigma_admissible(q);
    const Verdict c = is_control(q);
    for (const auto& f : c.failed) v.fail(f);
    return v;
}

bool in_original_set(const Real& x, const Real& y, int n) {
    require_dimension_range(n);
    if (!greater(x, 0) || !at_least(kHalf, x) || !greater(y, 0) || !greater(kHalf, y)) return false;
    if (n == 2) return greater(Real(2) * x + y, kHalf);
    return at_least(Real(2) * x + Real(n - 1) * y, Real(n - 1) / Real(2));
}

CriticalExponents critical_exponents(int n) {
    require_dimension_range(n);
    CriticalExponents c;
    c.p_conf = 1.0 + 4.0 / (n - 1);
    c.p_c = n == 2 ? std::numeric_limits<double>::infinity() : 1.0 + 4.0 / (n - 2);
    const double a = 0.5 + 1.0 / (n - 1);
    c.p_strauss = a + std::sqrt(a * a + 2.0 / (n - 1));
    return c;
}

namespace {

void require_exponent(double p, int n) {
    require_dimension_range(n);
    if (!(p > 1.0) || !(p < critical_exponents(n).p_c)) throw std::invalid_argument("p must lie in (1, p_c(n))");
}

}  // namespace

ClosedFormSigma closed_form_min_sigma(double p, int n) {
    require_exponent(p, n);
    if (n == 2) {
        if (p >= 5.0) return {1.0 - 2.0 / (p - 1.0), false, "sigma_3"};
        if (p > 3.0) return {0.75 - 1.0 / (p - 1.0), true, "sigma_2"};
        if (p > 2.0) return {0.75 - 1.5 / p, false, "sigma_1"};
        return {0.0, false, "sigma_0"};
    }
    if (n == 3) {
        if (p >= 3.0) return {1.5 - 2.0 / (p - 1.0), true, "sigma_3"};
        if (p > 2.0) return {1.0 - 1.0 / (p - 1.0), true, "sigma_2"};
        return {0.0, false, "sigma_0"};
    }
    const double m = n - 1.0;
    if (p >= 1.0 + 4.0 / m) return {n / 2.0 - 2.0 / (p - 1.0), true, "sigma_3"};
    if (p >= 1.0 + 4.0 * m / (m * m + 4.0)) return {(n + 1.0) / 4.0 - 1.0 / (p - 1.0), true, "sigma_2"};
    if (p > 1.0 + 3.0 / n) return {(n + 1.0) * (n * p - n - 3.0) / (4.0 * n * p - 2.0 * n - 2.0), true, "sigma_1"};
    return {0.0, false, "sigma_0"};
}

TablePair table_pair(const Real& p, int n, std::optional<Real> eps) {
    require_exponent(p.to_double(), n);
    const Real nudge = Real::exact(1, 1000000000);
    const Real one(1), two(2);
    TablePair t;
    if (n == 2) {
        if (at_least(p, 5)) {
            t.strict_row = true;
            t.sigma = one - two / (p - one) + nudge;
            const Real limit = greater(two - (one - t.sigma) * (p - one), Real::exact(1, 3))
                                   ? Real::exact(1, 3)
                                   : two - (one - t.sigma) * (p - one);
            const Real e = eps ? *eps : limit / two;
            if (!greater(e, 0) || !greater(limit, e)) throw std::invalid_argument("eps outside its admissible range");
            t.eps = e;
            t.inv_p1 = (two + t.sigma - Real(3) * e) / (Real(3) * p);
            t.inv_q1 = (Real(7) - Real(4) * t.sigma) / (Real(6) * p);
        } else if (greater(p, 3)) {
            t.sigma = Real::exact(3, 4) - one / (p - one);
            t.inv_p1 = (one + Real(3) * t.sigma) / (Real(3) * p);
            t.inv_q1 = (Real(3) - Real(4) * t.sigma) / Real(6);
        } else if (greater(p, 2)) {
            t.strict_row = true;
            const Real sigma_p = Real::exact(3, 4) - Real::exact(3, 2) / p;
            t.sigma = sigma_p + nudge;
            t.inv_p1 = (one - sigma_p) / p;
            t.inv_q1 = (one - t.sigma + sigma_p) / p;
        } else {
            t.strict_row = true;
            t.sigma = nudge;
            t.inv_p1 = one / (two * p);
            t.inv_q1 = (Real(3) - Real(4) * t.sigma) / Real(6);
        }
        return t;
    }
    if (n == 3) {
        if (greater(p, 2)) {
            t.sigma = at_least(p, 3) ? Real::exact(3, 2) - two / (p - one) : one - one / (p - one);
            t.inv_p1 = (one + t.sigma) / (two * p);
            t.inv_q1 = (two - t.sigma) / (two * p);
        } else {
            t.strict_row = true;
            t.sigma = nudge;
            t.inv_p1 = one / (two * p);
            t.inv_q1 = (one - t.sigma) / two;
        }
        return t;
    }
    const Real dim(n), m(n - 1);
    if (at_least(p, one + Real(4) / m) || at_least(p, one + Real(4) * m / (m * m + Real(4)))) {
        t.sigma = at_least(p, one + Real(4) / m) ? dim / two - two / (p - one) : (dim + one) / Real(4) - one / (p - one);
        t.inv_p1 = (two + m * t.sigma) / ((dim + one) * p);
        t.inv_q1 = (dim + Real(5) - Real(4) * t.sigma) / (two * (dim + one) * p);
    } else if (greater(p, one + Real(3) / dim)) {
        t.sigma = (dim + one) * (dim * p - dim - Real(3)) / (Real(4) * dim * p - two * dim - two);
        t.inv_p1 = one / (two * p);
        t.inv_q1 = (dim + Real(3) - two * t.sigma) / (two * dim * p);
    } else {
        t.strict_row = true;
        t.sigma = nudge;
        t.inv_p1 = one / (two * p);
        t.inv_q1 = (dim + one - Real(4) * t.sigma) / (two * (dim + one));
    }
    return t;
}

namespace {

// a x + b y >= c, strict when flagged.
struct HalfPlane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    bool strict = false;
    const char* name = "";

    double slack(double x, double y) const { return a * x + b * y - c; }
};

struct Edge {
    std::array<double, 2> from;
    std::array<double, 2> to;
    int label;
};

using Polygon = std::vector<Edge>;

Polygon unit_box() {
    const std::array<std::array<double, 2>, 4> v{{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}};
    Polygon poly;
    for (int k = 0; k < 4; ++k) poly.push_back({v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % 4)], k});
    return poly;
}

// Clips a convex polygon (edge list in order) to the half-plane; new edges
// along the clipping line carry `label`.
Polygon clip(const Polygon& poly, const HalfPlane& h, int label) {
    constexpr double kSlop = 1e-15;
    Polygon kept;
    for (const Edge& e : poly) {
        const double s0 = h.slack(e.from[0], e.from[1]);
        const double s1 = h.slack(e.to[0], e.to[1]);
        const bool in0 = s0 >= -kSlop, in1 = s1 >= -kSlop;
        if (!in0 && !in1) continue;
        Edge out = e;
        if (in0 != in1) {
            const double f = s0 / (s0 - s1);
            const std::array<double, 2> cut{e.from[0] + f * (e.to[0] - e.from[0]), e.from[1] + f * (e.to[1] - e.from[1])};
            if (in0) {
                out.to = cut;
            } else {
                out.from = cut;
            }
        }
        kept.push_back(out);
    }
    if (kept.empty()) return kept;
    Polygon closed;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        closed.push_back(kept[k]);
        const Edge& next = kept[(k + 1) % kept.size()];
        const auto& end = kept[k].to;
        if (std::hypot(end[0] - next.from[0], end[1] - next.from[1]) > 1e-15) closed.push_back({end, next.from, label});
    }
    return closed;
}

std::vector<HalfPlane> admissible_constraints(double sigma, int n, bool open_flag) {
    return {
        {1.0, static_cast<double>(n), n / 2.0 - sigma, n == 2 || open_flag, "scaling_line"},
        {0.0, 1.0, 0.5 - 2.0 * sigma / (n + 1), open_flag, "inv_q_cap"},
    };
}

std::vector<HalfPlane> control_constraints(double sigma, int n, double p) {
    return {
        {-p, 0.0, -1.0, true, "dual box"},
        {p, 0.0, 0.5, false, "dual box"},
        {0.0, -p, -1.0, true, "dual box"},
        {0.0, p, 0.5, true, "dual box"},
        {-p, -n * p, -n / 2.0 - 2.0 + sigma, n == 2, "dual_scaling_line"},
        {0.0, -p, (n - 3.0) / (2.0 * (n + 1)) + 2.0 * sigma / (n + 1) - 1.0, false, "dual_inv_q_floor"},
    };
}

// Box sides as half-planes, matching unit_box edge labels 0..3.
const std::array<HalfPlane, 4> kBoxSides{{
    {0.0, 1.0, 0.0, true, "box"},    // y > 0
    {-1.0, 0.0, -0.5, false, "box"}, // x <= 1/2
    {0.0, -1.0, -0.5, true, "box"},  // y < 1/2
    {1.0, 0.0, 0.0, true, "box"},    // x > 0
}};

std::vector<HalfPlane> compatible_constraints(double sigma, int n, double p) {
    std::vector<HalfPlane> all(kBoxSides.begin(), kBoxSides.end());
    for (const auto& h : admissible_constraints(sigma, n, false)) all.push_back(h);
    for (const auto& h : control_constraints(sigma, n, p)) all.push_back(h);
    return all;
}

Polygon feasible_polygon(double sigma, int n, double p) {
    Polygon poly = unit_box();
    const auto all = compatible_constraints(sigma, n, p);
    for (std::size_t k = 4; k < all.size() && !poly.empty(); ++k) poly = clip(poly, all[k], static_cast<int>(k));
    return poly;
}

std::array<double, 2> centroid(const Polygon& poly) {
    double x = 0.0, y = 0.0;
    for (const Edge& e : poly) {
        x += e.from[0];
        y += e.from[1];
    }
    return {x / static_cast<double>(poly.size()), y / static_cast<double>(poly.size())};
}

bool lattice_point_exists(double sigma, int n, double p, int cells) {
    const auto all = compatible_constraints(sigma, n, p);
    for (int i = 1; i <= cells; ++i) {
        const double x = 0.5 * i / cells;
        for (int j = 1; j < cells; ++j) {
            const double y = 0.5 * j / cells;
            bool ok = true;
            for (const HalfPlane& h : all) {
                const double s = h.slack(x, y);
                if (h.strict ? !(s > 0.0) : !(s >= 0.0)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

bool compatible_at(double x, double y, double sigma, int n, double p) {
    PairQuery q;
    q.inv_p1 = Real::approx(x);
    q.inv_q1 = Real::approx(y);
    q.n = n;
    q.sigma = Real::approx(sigma);
    q.p = Real::approx(p);
    return static_cast<bool>(is_compatible(q));
}

}  // namespace

MinSigmaResult min_sigma(double p, int n, double tol) {
    require_exponent(p, n);
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    MinSigmaResult out;
    out.closed_form = closed_form_min_sigma(p, n);
    auto feasible = [&](double s) { return !feasible_polygon(s, n, p).empty(); };

    // Upper bracket: the table's own pair when it checks out, else a scan.
    double hi = std::numeric_limits<double>::quiet_NaN();
    const TablePair seed = table_pair(Real::exact_from_double(p), n);
    {
        PairQuery q{seed.inv_p1, seed.inv_q1, n, seed.sigma, Real::exact_from_double(p), false};
        const double s = seed.sigma.to_double();
        if (s > 0.0 && s < 1.0 && is_compatible(q) && feasible(s)) hi = s;
    }
    if (std::isnan(hi)) {
        for (int k = 1; k < 4096; ++k) {
            if (feasible(k / 4096.0)) {
                hi = k / 4096.0;
                break;
            }
        }
    }
    if (std::isnan(hi)) throw std::logic_error("no compatible pair for any sigma in (0, 1)");

    double lo = 0.0;
    if (feasible(0.0)) {
        hi = 0.0;
    } else {
        const double resolution = std::min(tol * 1e-3, 1e-13);
        while (hi - lo > resolution) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? hi : lo) = mid;
        }
    }
    out.sigma = hi;

    // The infimum is attained when no strict constraint pins the optimum.
    if (hi > 0.0) {
        const Polygon at_min = feasible_polygon(hi, n, p);
        const auto all = compatible_constraints(hi, n, p);
        out.attained = true;
        for (const HalfPlane& h : all) {
            double worst = 0.0;
            for (const Edge& e : at_min) worst = std::max(worst, std::abs(h.slack(e.from[0], e.from[1])));
            if (h.strict && worst <= 1e-7) out.attained = false;
        }
    }

    // Witness: a compatible pair at the minimum, or just above it.
    const double witness_sigma = out.attained ? hi : hi + std::max(tol, 1e-8);
    const Polygon poly = feasible_polygon(witness_sigma, n, p);
    if (poly.empty()) throw std::logic_error("feasible polygon vanished above the minimum");
    const auto [wx, wy] = centroid(poly);
    if (!compatible_at(wx, wy, witness_sigma, n, p)) throw std::logic_error("witness pair failed the compatibility check");
    out.witness_inv_p1 = wx;
    out.witness_inv_q1 = wy;
    out.witness_sigma = witness_sigma;

    const double guard = out.sigma - std::max(10.0 * tol, 1e-6);
    if (guard > 0.0) out.lattice_consistent = !lattice_point_exists(guard, n, p, 400);
    return out;
}

RegionPolygon region_polygon(double sigma, int n) {
    require_dimension_range(n);
    require_sigma(Real::approx(sigma));
    RegionPolygon out;
    out.n = n;
    out.sigma = sigma;
    if (n == 2) {
        out.regime = sigma < 0.75 ? "sigma < 3/4" : "sigma >= 3/4";
    } else if (n == 3) {
        out.regime = "n = 3";
    } else {
        out.regime = sigma < (n + 1.0) / (2.0 * (n - 1.0)) ? "sigma < (n+1)/(2(n-1))" : "sigma >= (n+1)/(2(n-1))";
    }
    const auto constraints = admissible_constraints(sigma, n, false);
    Polygon poly = unit_box();
    for (std::size_t k = 0; k < constraints.size() && !poly.empty(); ++k) poly = clip(poly, constraints[k], static_cast<int>(4 + k));
    auto degenerate = [](const Edge& e) { return std::hypot(e.to[0] - e.from[0], e.to[1] - e.from[1]) < 1e-14; };
    for (const Edge& e : poly) {
        if (degenerate(e)) continue;
        out.vertices.emplace_back(e.from[0], e.from[1]);
        const bool open = e.label < 4 ? kBoxSides[static_cast<std::size_t>(e.label)].strict
                                       : constraints[static_cast<std::size_t>(e.label - 4)].strict;
        out.open_edges.push_back(open);
    }
    const HalfPlane t_n = n == 2 ? HalfPlane{2.0, 1.0, 0.5, true, "T"} : HalfPlane{2.0, n - 1.0, (n - 1.0) / 2.0, false, "T"};
    const Polygon original = poly.empty() ? poly : clip(poly, t_n, 99);
    for (const Edge& e : original) {
        if (!degenerate(e)) out.original.emplace_back(e.from[0], e.from[1]);
    }
    return out;
}

namespace {

// Signed distances to the edges of a counter-clockwise polygon (positive inside).
std::vector<double> edge_distances(const std::vector<std::pair<double, double>>& v, double x, double y) {
    std::vector<double> d;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto [x0, y0] = v[k];
        const auto [x1, y1] = v[(k + 1) % v.size()];
        const double len = std::hypot(x1 - x0, y1 - y0);
        if (len < 1e-12) {
            d.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        d.push_back(((x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)) / len);
    }
    return d;
}

}  // namespace

RegionMembership region_contains(const RegionPolygon& poly, double x, double y, double band) {
    RegionMembership m;
    if (poly.vertices.size() < 3) return m;
    const auto d = edge_distances(poly.vertices, x, y);
    bool inside = true;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] < -band) return m;
        if (std::abs(d[k]) <= band) {
            m.on_boundary = true;
            if (poly.open_edges[k]) inside = false;
        }
    }
    m.inside = inside;
    if (inside && poly.original.size() >= 3) {
        const auto od = edge_distances(poly.original, x, y);
        m.in_original = std::all_of(od.begin(), od.end(), [band](double v) { return v >= -band; });
    }
    return m;
}

KappaRange kappa_range(const PairQuery& q) {
    if (!is_sigma_admissible(q)) throw std::invalid_argument("kappa range needs a sigma-admissible pair");
    const Real& x = q.inv_p1;
    const Real& y = q.inv_q1;
    const int n = q.n;
    KappaRange k;
    if (in_original_set(x, y, n)) {
        k.upper = q.sigma - Real(n + 1) / Real(2) * (kHalf - y);
    } else if (n >= 3) {
        k.upper = Real(n) * y + x - Real(n) / Real(2) + q.sigma;
    } else {
        k.upper = Real(2) * y + x - Real(1) + q.sigma;
        k.upper_open = true;
    }
    return k;
}

}  // namespace hyperwave
