#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kgd {

/// Sparse polynomial in (t, x1, x2, x3). Supports exactly the algebra needed
/// to apply wave operators and commutator fields in closed form, so identity
/// residuals are pure roundoff rather than discretization error.
class Poly4 {
public:
    using Expo = std::array<int, 4>;

    Poly4() = default;
    static Poly4 constant(double c) {
        Poly4 p;
        if (c != 0.0) p.terms_[{0, 0, 0, 0}] = c;
        return p;
    }
    /// The coordinate monomial: axis 0 = t, 1..3 = x^a.
    static Poly4 coord(int axis) {
        Poly4 p;
        Expo e{};
        e[axis] = 1;
        p.terms_[e] = 1.0;
        return p;
    }

    Poly4& operator+=(const Poly4& o) {
        for (const auto& [e, c] : o.terms_) {
            auto& slot = terms_[e];
            slot += c;
            if (slot == 0.0) terms_.erase(e);
        }
        return *this;
    }
    friend Poly4 operator+(Poly4 a, const Poly4& b) { return a += b; }
    friend Poly4 operator-(const Poly4& a, const Poly4& b) { return a + (b * -1.0); }

    friend Poly4 operator*(const Poly4& p, double s) {
        Poly4 r;
        if (s != 0.0)
            for (const auto& [e, c] : p.terms_) r.terms_[e] = c * s;
        return r;
    }
    friend Poly4 operator*(const Poly4& a, const Poly4& b) {
        Poly4 r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Expo e;
                for (int i = 0; i < 4; ++i) e[i] = ea[i] + eb[i];
                auto& slot = r.terms_[e];
                slot += ca * cb;
                if (slot == 0.0) r.terms_.erase(e);
            }
        return r;
    }

    Poly4 derivative(int axis) const {
        Poly4 r;
        for (const auto& [e, c] : terms_) {
            if (e[axis] == 0) continue;
            Expo d = e;
            d[axis] -= 1;
            r.terms_[d] += c * e[axis];
        }
        return r;
    }

    double eval(const std::array<double, 4>& x) const {
        double s = 0.0;
        for (const auto& [e, c] : terms_) {
            double m = c;
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < e[i]; ++k) m *= x[i];
            s += m;
        }
        return s;
    }

    bool empty() const { return terms_.empty(); }

private:
    std::map<Expo, double> terms_;
};

/// Field of the form p(t,x) * exp(g(t,x)). Closed under coordinate
/// derivatives and multiplication by polynomials, hence under every operator
/// in the commutator table (boosts, rotations, the Klein-Gordon operator).
struct SymField {
    Poly4 p;
    Poly4 g;

    double eval(const std::array<double, 4>& x) const {
        return p.eval(x) * std::exp(g.eval(x));
    }
};

inline SymField sym_derivative(const SymField& f, int axis) {
    return {f.p.derivative(axis) + f.p * f.g.derivative(axis), f.g};
}

inline SymField sym_scale(const SymField& f, double s) { return {f.p * s, f.g}; }
inline SymField sym_mul(const SymField& f, const Poly4& q) { return {f.p * q, f.g}; }

/// One first-order field from the admissible set: d_alpha, L_a, Omega_ab.
struct SymOp {
    enum class Kind { partial, boost, rotation } kind;
    int a = 0, b = 0;  // partial: axis 0..3; boost: spatial 1..3; rotation: pair
};

inline SymField sym_apply(const SymOp& op, const SymField& f) {
    switch (op.kind) {
        case SymOp::Kind::partial:
            return sym_derivative(f, op.a);
        case SymOp::Kind::boost:
            // L_a = x^a d_t + t d_a
            return {sym_mul(sym_derivative(f, 0), Poly4::coord(op.a)).p +
                        sym_mul(sym_derivative(f, op.a), Poly4::coord(0)).p,
                    f.g};
        default:
            // Omega_ab = x^a d_b - x^b d_a
            return {sym_mul(sym_derivative(f, op.b), Poly4::coord(op.a)).p -
                        sym_mul(sym_derivative(f, op.a), Poly4::coord(op.b)).p,
                    f.g};
    }
}

/// -Box + m^2 with the convention -Box = d_tt - Lap.
inline SymField sym_kg_operator(const SymField& f, double m) {
    SymField r = sym_derivative(sym_derivative(f, 0), 0);
    for (int a = 1; a < 4; ++a) {
        const SymField dd = sym_derivative(sym_derivative(f, a), a);
        r.p = r.p - dd.p;
    }
    r.p += f.p * (m * m);
    return r;
}

}  // namespace kgd
