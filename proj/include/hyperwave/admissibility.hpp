#pragma once

// Strichartz admissibility calculator on H^n in the reciprocal plane
// (x, y) = (1/p1, 1/q1): sigma-admissible, (p, sigma)-control and compatible
// pairs, minimal regularity, critical exponents and region polygons.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hyperwave {

using Rational = boost::multiprecision::cpp_rational;

// Comparison band used whenever an inexact operand is involved.
inline constexpr double kComparisonBand = 1e-12;

// Exact rational when built from integers, fractions or decimal text;
// otherwise a double that is compared with kComparisonBand.
class Real {
public:
    Real(int value) : value_(Rational(value)) {}
    Real(long long value) : value_(Rational(value)) {}
    explicit Real(Rational value) : value_(std::move(value)) {}
    static Real exact(long long num, long long den);
    static Real approx(double value);
    // The rational with exactly the value of the double.
    static Real exact_from_double(double value);
    // "3", "-5/6", "0.55", "2.5e-1"; throws std::invalid_argument.
    static Real parse(std::string_view text);

    bool is_exact() const { return std::holds_alternative<Rational>(value_); }
    const Rational* rational() const { return std::get_if<Rational>(&value_); }
    double to_double() const;
    std::string str() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);

    // a >= b and a > b, exact for exact operands and banded otherwise.
    friend bool at_least(const Real& a, const Real& b);
    friend bool greater(const Real& a, const Real& b);

private:
    explicit Real(double value) : value_(value) {}
    std::variant<Rational, double> value_;
};

bool at_least(const Real& a, const Real& b);
bool greater(const Real& a, const Real& b);

inline constexpr int kMinAdmissibleDimension = 2;
inline constexpr int kMaxAdmissibleDimension = 6;

struct PairQuery {
    Real inv_p1 = 0;
    Real inv_q1 = 0;
    int n = 3;
    Real sigma = Real::exact(1, 2);
    std::optional<Real> p;   // nonlinearity exponent, needed for control queries
    bool open_flag = false;  // strict scaling line and 1/q cap for the admissible pair

    static PairQuery from_exponents(const Real& p1, const Real& q1, int n, const Real& sigma,
                                    std::optional<Real> p = std::nullopt, bool open_flag = false);
};

// Outcome of a check with the names of the failed conditions.
struct Verdict {
    bool ok = true;
    std::vector<std::string> failed;
    explicit operator bool() const { return ok; }
    void fail(std::string what);
};

// (n+1)/2 (1/2 - 1/q); throws for q < 2.
Real beta(const Real& q, int n);

Verdict is_sigma_admissible(const PairQuery& q);
Verdict is_control(const PairQuery& q);
Verdict is_compatible(const PairQuery& q);

// Membership in the original admissible set T_n.
bool in_original_set(const Real& inv_p1, const Real& inv_q1, int n);

struct CriticalExponents {
    double p_conf = 0.0;
    double p_c = 0.0;  // +inf for n = 2
    double p_strauss = 0.0;
};
CriticalExponents critical_exponents(int n);

// Closed-form minimal regularity from the local theory tables.
struct ClosedFormSigma {
    double value = 0.0;
    bool attained = true;  // false where the table requires sigma > value
    std::string label;     // sigma_0 .. sigma_3
};
ClosedFormSigma closed_form_min_sigma(double p, int n);

// The compatible pair the tables list at (or just above) the minimal sigma.
struct TablePair {
    Real inv_p1 = 0;
    Real inv_q1 = 0;
    Real sigma = 0;  // regularity at which the pair is offered
    bool strict_row = false;
    std::optional<Real> eps;  // n = 2, p >= 5 rows only
};
// eps defaults to half its upper limit where the row needs one.
TablePair table_pair(const Real& p, int n, std::optional<Real> eps = std::nullopt);

struct MinSigmaResult {
    double sigma = 0.0;
    bool attained = false;
    double witness_inv_p1 = 0.0;  // compatible pair at (or just above) sigma
    double witness_inv_q1 = 0.0;
    double witness_sigma = 0.0;
    bool lattice_consistent = true;  // no lattice point beats the polygon search
    ClosedFormSigma closed_form;
};
// Infimum over sigma in (0, 1) of the existence of a compatible pair, to tol.
// Throws std::invalid_argument unless 1 < p < p_c(n).
MinSigmaResult min_sigma(double p, int n, double tol = 1e-9);

struct RegionPolygon {
    int n = 3;
    double sigma = 0.5;
    std::string regime;
    std::vector<std::pair<double, double>> vertices;  // counter-clockwise (1/p1, 1/q1)
    std::vector<bool> open_edges;                     // edge k joins vertex k and k+1
    std::vector<std::pair<double, double>> original;  // sub-polygon inside T_n
};
RegionPolygon region_polygon(double sigma, int n);

// Point-in-polygon with the polygon's closed/open edges; points within band
// of an edge are reported through on_boundary.
struct RegionMembership {
    bool inside = false;
    bool on_boundary = false;
    bool in_original = false;
};
RegionMembership region_contains(const RegionPolygon& poly, double x, double y, double band = 1e-9);

// Range [0, upper] (or [0, upper) when upper_open) of saved derivatives.
struct KappaRange {
    Real upper = 0;
    bool upper_open = false;
};
KappaRange kappa_range(const PairQuery& q);

}  // namespace hyperwave
