#pragma once

// Vector field of the additional-food predator-prey model with
// Beddington-DeAngelis (mutual interference) response:
//
//   dx/dt = x (1 - x/k) - x y / (1 + alpha xi + x + epsilon y)
//   dy/dt = beta (x + xi) y / (1 + alpha xi + x + epsilon y) - delta y
//
// x is the prey (pest) density, y the predator density. Everything in this
// header is a pure function templated on the scalar type so that it can be
// evaluated in double, long double or an autodiff scalar.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "afmi/errors.hpp"

namespace afmi {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

// (x, y) with x = prey, y = predator.
using State = Eigen::Vector2d;

template <typename Scalar>
struct BasicModelParams {
    Scalar alpha{};    // reciprocal of additional-food quality
    Scalar beta{};     // predator conversion rate
    Scalar delta{};    // predator death rate
    Scalar epsilon{};  // mutual interference strength
    Scalar xi{};       // additional-food quantity
    Scalar k{};        // prey carrying capacity

    // 1 + alpha xi, the constant part of the response denominator.
    Scalar food_offset() const { return Scalar(1) + alpha * xi; }

    bool low_interference() const { return epsilon < Scalar(1); }

    BasicModelParams with_xi(Scalar value) const {
        BasicModelParams copy = *this;
        copy.xi = value;
        return copy;
    }

    friend bool operator==(const BasicModelParams&, const BasicModelParams&) = default;
};

using ModelParams = BasicModelParams<double>;

// Throws DomainError unless all fields are finite, alpha, beta, delta,
// epsilon, k > 0, xi >= 0 and beta > delta.
template <typename Scalar>
void validate(const BasicModelParams<Scalar>& p) {
    using std::isfinite;
    const Scalar fields[] = {p.alpha, p.beta, p.delta, p.epsilon, p.xi, p.k};
    for (const Scalar& f : fields) {
        if (!isfinite(f)) throw DomainError("model parameters must be finite");
    }
    if (!(p.alpha > 0 && p.beta > 0 && p.delta > 0 && p.epsilon > 0 && p.k > 0)) {
        throw DomainError("alpha, beta, delta, epsilon and k must be strictly positive");
    }
    if (p.xi < 0) throw DomainError("xi must be non-negative");
    if (!(p.beta > p.delta)) throw DomainError("beta must exceed delta");
}

template <typename Scalar>
BasicModelParams<Scalar> make_params(Scalar alpha, Scalar beta, Scalar delta, Scalar epsilon,
                                     Scalar xi, Scalar k) {
    BasicModelParams<Scalar> p{alpha, beta, delta, epsilon, xi, k};
    validate(p);
    return p;
}

// Reference parameter set used for all reproduced scenarios.
inline ModelParams reference_params(double xi = 2.2) {
    return make_params(0.1, 0.319, 0.3, 0.322, xi, 15.0);
}

template <typename Derived>
bool in_phi(const Eigen::MatrixBase<Derived>& s) {
    using std::isfinite;
    return isfinite(s(0)) && isfinite(s(1)) && s(0) >= 0 && s(1) >= 0;
}

namespace detail {
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& s) {
    using std::isfinite;
    if (!isfinite(s(0)) || !isfinite(s(1))) throw DomainError("state must be finite");
}
}  // namespace detail

// 1 + alpha xi + x + epsilon y
template <typename Scalar>
Scalar response_denominator(const BasicModelParams<Scalar>& p, const Vector2<Scalar>& s) {
    return p.food_offset() + s(0) + p.epsilon * s(1);
}

template <typename Scalar>
Vector2<Scalar> vector_field(const BasicModelParams<Scalar>& p, const Vector2<Scalar>& s) {
    detail::require_finite(s);
    const Scalar x = s(0), y = s(1);
    const Scalar den = response_denominator(p, s);
    return Vector2<Scalar>(x * (Scalar(1) - x / p.k) - x * y / den,
                           p.beta * (x + p.xi) * y / den - p.delta * y);
}

template <typename Scalar>
Matrix2<Scalar> jacobian(const BasicModelParams<Scalar>& p, const Vector2<Scalar>& s) {
    detail::require_finite(s);
    const Scalar x = s(0), y = s(1);
    const Scalar c0 = p.food_offset();
    const Scalar den = c0 + x + p.epsilon * y;
    const Scalar den2 = den * den;
    Matrix2<Scalar> J;
    J(0, 0) = Scalar(1) - Scalar(2) * x / p.k - (c0 + p.epsilon * y) * y / den2;
    J(0, 1) = -(c0 + x) * x / den2;
    J(1, 0) = (c0 + p.epsilon * y - p.xi) * p.beta * y / den2;
    J(1, 1) = p.beta * (x + p.xi) * (c0 + x) / den2 - p.delta;
    return J;
}

// Partial derivative of the vector field with respect to xi.
template <typename Scalar>
Vector2<Scalar> field_xi_derivative(const BasicModelParams<Scalar>& p, const Vector2<Scalar>& s) {
    const Scalar x = s(0), y = s(1);
    const Scalar den = response_denominator(p, s);
    const Scalar den2 = den * den;
    return Vector2<Scalar>(p.alpha * x * y / den2,
                           p.beta * y / den - p.alpha * p.beta * (x + p.xi) * y / den2);
}

// Second partial derivatives of both components.
template <typename Scalar>
struct FieldHessians {
    Matrix2<Scalar> prey;      // d2(dx/dt) / d(x,y)^2
    Matrix2<Scalar> predator;  // d2(dy/dt) / d(x,y)^2

    // D^2 F (u, v) as a vector.
    Vector2<Scalar> bilinear(const Vector2<Scalar>& u, const Vector2<Scalar>& v) const {
        return Vector2<Scalar>(u.dot(prey * v), u.dot(predator * v));
    }
};

template <typename Scalar>
FieldHessians<Scalar> field_hessians(const BasicModelParams<Scalar>& p, const Vector2<Scalar>& s) {
    const Scalar x = s(0), y = s(1);
    const Scalar c0 = p.food_offset();
    const Scalar eps = p.epsilon;
    const Scalar den = c0 + x + eps * y;
    const Scalar den2 = den * den;
    const Scalar den3 = den2 * den;
    const Scalar two(2);

    FieldHessians<Scalar> h;
    h.prey(0, 0) = -two / p.k + two * y * (c0 + eps * y) / den3;
    h.prey(0, 1) = -(c0 + two * eps * y) / den2 + two * eps * y * (c0 + eps * y) / den3;
    h.prey(1, 0) = h.prey(0, 1);
    h.prey(1, 1) = two * eps * x * (c0 + x) / den3;

    const Scalar shift = c0 + eps * y - p.xi;
    h.predator(0, 0) = -two * p.beta * y * shift / den3;
    h.predator(0, 1) = p.beta * (c0 + two * eps * y - p.xi) / den2 - two * eps * p.beta * y * shift / den3;
    h.predator(1, 0) = h.predator(0, 1);
    h.predator(1, 1) = -two * eps * p.beta * (x + p.xi) * (c0 + x) / den3;
    return h;
}

// ---------------------------------------------------------------- nullclines

// Non-trivial prey nullcline y(x) = (k - x)(1 + alpha xi + x) / (k - (k - x) epsilon).
template <typename Scalar>
Scalar prey_nullcline_y(const BasicModelParams<Scalar>& p, Scalar x) {
    using std::abs;
    if (x < Scalar(0) || x > p.k) throw PreconditionError("prey nullcline is defined on 0 <= x <= k");
    const Scalar den = p.k - (p.k - x) * p.epsilon;
    if (abs(den) <= Scalar(1e-12)) throw InfeasibleError("prey nullcline denominator is singular");
    return (p.k - x) * (p.food_offset() + x) / den;
}

template <typename Scalar>
Scalar predator_nullcline_slope(const BasicModelParams<Scalar>& p) {
    return (p.beta - p.delta) / (p.delta * p.epsilon);
}

template <typename Scalar>
Scalar predator_nullcline_intercept(const BasicModelParams<Scalar>& p) {
    return ((p.beta - p.delta * p.alpha) * p.xi - p.delta) / (p.delta * p.epsilon);
}

// Non-trivial predator nullcline (a straight line); may be negative.
template <typename Scalar>
Scalar predator_nullcline_y(const BasicModelParams<Scalar>& p, Scalar x) {
    return predator_nullcline_slope(p) * x + predator_nullcline_intercept(p);
}

// ------------------------------------------------------ equivalent polynomial

template <typename Scalar>
struct BasicEquivalentParams {
    Scalar P{}, Q{}, R{}, N{}, M{};
    Scalar k{};  // carried along; the polynomial field needs it explicitly
};

using EquivalentParams = BasicEquivalentParams<double>;

template <typename Scalar>
BasicEquivalentParams<Scalar> equivalent_params(const BasicModelParams<Scalar>& p) {
    return {p.food_offset() / p.k, p.epsilon / p.k, p.k * p.beta, p.k * p.delta, p.xi / p.k, p.k};
}

// Polynomial system obtained with x = k u, y = v and dt = d tau / (P + u + Q v).
template <typename Scalar>
Vector2<Scalar> equivalent_field(const BasicEquivalentParams<Scalar>& ep, Scalar u, Scalar v) {
    const Scalar g = ep.P + u + ep.Q * v;
    return Vector2<Scalar>(u * (ep.k * (Scalar(1) - u) * g - v), v * (ep.R * (u + ep.M) - ep.N * g));
}

template <typename Scalar>
Matrix2<Scalar> equivalent_jacobian(const BasicEquivalentParams<Scalar>& ep, Scalar u, Scalar v) {
    const Scalar g = ep.P + u + ep.Q * v;
    Matrix2<Scalar> J;
    J(0, 0) = ep.k * (Scalar(1) - u) * g - v + u * ep.k * ((Scalar(1) - u) - g);
    J(0, 1) = u * (ep.k * (Scalar(1) - u) * ep.Q - Scalar(1));
    J(1, 0) = v * (ep.R - ep.N);
    J(1, 1) = ep.R * (u + ep.M) - ep.N * g - v * ep.N * ep.Q;
    return J;
}

// ----------------------------------------------------------------- geometry

struct BoundednessCheck {
    bool bounded;
    double margin;  // 1 - epsilon (1 - delta)
};

template <typename Scalar>
BoundednessCheck is_bounded_regime(const BasicModelParams<Scalar>& p) {
    const double margin = static_cast<double>(Scalar(1) - p.epsilon * (Scalar(1) - p.delta));
    return {margin > 0.0, margin};
}

struct SlopeComparison {
    double m_prey_axis;  // tangent slope of the prey nullcline where it meets the y-axis
    double m_pred_line;  // slope of the predator nullcline
    bool two_interior_slope_ok;
    double xi_slope_bound;  // xi at which both slopes coincide
};

template <typename Scalar>
SlopeComparison slope_comparison(const BasicModelParams<Scalar>& p) {
    if (!(p.epsilon < Scalar(1))) {
        throw InfeasibleError("prey nullcline does not meet the predator axis when epsilon >= 1");
    }
    const Scalar one_m = Scalar(1) - p.epsilon;
    SlopeComparison out{};
    out.m_prey_axis = static_cast<double>((p.k * one_m - p.food_offset()) / (p.k * one_m * one_m));
    out.m_pred_line = static_cast<double>(predator_nullcline_slope(p));
    out.two_interior_slope_ok = out.m_prey_axis > out.m_pred_line;
    out.xi_slope_bound = static_cast<double>(
        (p.k * one_m * (p.delta - p.beta * one_m) - p.delta * p.epsilon) / (p.alpha * p.delta * p.epsilon));
    return out;
}

}  // namespace afmi
