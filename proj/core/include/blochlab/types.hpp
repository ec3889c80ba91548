#ifndef BLOCHLAB_TYPES_HPP
#define BLOCHLAB_TYPES_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blochlab {

using Complex = std::complex<double>;

/// A point of the open unit polydisk U^n (every coordinate modulus < 1).
struct Point {
    std::vector<Complex> coords;

    Point() = default;
    explicit Point(std::vector<Complex> c) : coords(std::move(c)) {}
    Point(std::initializer_list<Complex> c) : coords(c) {}

    int dimension() const { return static_cast<int>(coords.size()); }
    Complex& operator[](int k) { return coords[static_cast<size_t>(k)]; }
    const Complex& operator[](int k) const { return coords[static_cast<size_t>(k)]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
};

/// True when every coordinate has modulus strictly below one.
inline bool in_polydisk(const Point& z) {
    for (const auto& c : z.coords) {
        if (!(std::abs(c) < 1.0)) return false;
    }
    return !z.coords.empty();
}

/// Distance of z to the topological boundary: 1 - max_k |z_k|.
inline double boundary_margin(const Point& z) {
    double max_mod = 0.0;
    for (const auto& c : z.coords) max_mod = std::max(max_mod, std::abs(c));
    return 1.0 - max_mod;
}

/// Function value together with its n complex first partials at a point.
struct Jet {
    Complex value{};
    std::vector<Complex> partials;

    Jet() = default;
    Jet(Complex v, std::vector<Complex> p) : value(v), partials(std::move(p)) {}
    explicit Jet(int n) : value(0.0), partials(static_cast<size_t>(n), Complex{}) {}

    int dimension() const { return static_cast<int>(partials.size()); }
};

inline bool all_finite(const Jet& j) {
    if (!std::isfinite(j.value.real()) || !std::isfinite(j.value.imag())) return false;
    for (const auto& p : j.partials) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return false;
    }
    return true;
}

/// Source/target exponents of a map B^p(U^n) -> B^q(U^n).
struct BlochParams {
    double p = 1.0;
    double q = 1.0;
    int n = 1;

    bool valid() const {
        return n >= 1 && std::isfinite(p) && p >= 0.0 && std::isfinite(q) && q >= 0.0;
    }
};

/// The criterion formulas change shape at p = 1 (log vs power), so the
/// exponent is classified with a small guard band around 1.
enum class Regime { p_eq_1, p_lt_1, p_gt_1 };

inline constexpr double kRegimeEpsilon = 1e-12;

inline Regime regime_of(double p) {
    if (std::abs(p - 1.0) <= kRegimeEpsilon) return Regime::p_eq_1;
    return p < 1.0 ? Regime::p_lt_1 : Regime::p_gt_1;
}

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::p_eq_1: return "p=1";
        case Regime::p_lt_1: return "p<1";
        case Regime::p_gt_1: return "p>1";
    }
    return "?";
}

/// Runtime failure while evaluating a holomorphic expression or operator.
class EvalError : public std::runtime_error {
public:
    enum class Kind {
        pole,        // quotient denominator under the guard threshold
        log_branch,  // log/real-power argument too close to zero
        self_map,    // a phi coordinate left the polydisk
        domain,      // dimension mismatch or point outside U^n
    };

    EvalError(Kind kind, const std::string& msg, std::optional<Point> witness = {})
        : std::runtime_error(msg), kind_(kind), witness_(std::move(witness)) {}

    Kind kind() const { return kind_; }
    const std::optional<Point>& witness() const { return witness_; }

    EvalError with_witness(Point w) const {
        return EvalError(kind_, what(), std::move(w));
    }

private:
    Kind kind_;
    std::optional<Point> witness_;
};

}  // namespace blochlab

#endif
