// Copyright 2026 The agqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>

#include "agqc/graph.hpp"

namespace agqc {

/// i^k for k in 0..3.
inline std::complex<double> i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

/// Phase times a tensor product of Hermitian single-site Paulis.
///
/// Site letter from (x, z): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. The overall
/// phase is i^phase, so the four values +1, +i, -1, -i are exact.
struct PauliString {
    VertexMask x = 0;
    VertexMask z = 0;
    std::uint8_t phase = 0;

    static PauliString identity() { return {}; }
    static PauliString X(Vertex v) { return {bit(v), 0, 0}; }
    static PauliString Y(Vertex v) { return {bit(v), bit(v), 0}; }
    static PauliString Z(Vertex v) { return {0, bit(v), 0}; }

    char letter(Vertex v) const {
        bool xb = contains(x, v), zb = contains(z, v);
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }

    VertexMask support() const { return x | z; }
    int weight() const { return popcount(x | z); }
    bool is_identity_up_to_phase() const { return (x | z) == 0; }

    PauliString negated() const { return {x, z, static_cast<std::uint8_t>((phase + 2) & 3)}; }

    friend PauliString operator*(const PauliString &a, const PauliString &b) {
        // Per-site phase of sigma_a * sigma_b, in powers of i.
        int k = a.phase + b.phase;
        VertexMask both = (a.x | a.z) & (b.x | b.z);
        for (Vertex v : mask_to_vertices(both)) {
            int x1 = contains(a.x, v), z1 = contains(a.z, v);
            int x2 = contains(b.x, v), z2 = contains(b.z, v);
            if (x1 && z1) {
                k += z2 - x2;
            } else if (x1) {
                k += z2 * (2 * x2 - 1);
            } else {
                k += x2 * (1 - 2 * z2);
            }
        }
        return {a.x ^ b.x, a.z ^ b.z, static_cast<std::uint8_t>(((k % 4) + 4) % 4)};
    }

    /// True when the Pauli parts anticommute (phases ignored).
    friend bool anticommutes(const PauliString &a, const PauliString &b) {
        return odd_parity((a.x & b.z) ^ (a.z & b.x));
    }

    bool operator==(const PauliString &) const = default;
};

inline std::string phase_string(std::uint8_t phase) {
    static const char *names[] = {"+1", "+i", "-1", "-i"};
    return names[phase & 3];
}

/// Pauli letters with 1-based site labels, e.g. "Z1 X2 Z3"; "I" for identity.
inline std::string letters_string(const PauliString &p) {
    std::string out;
    for (Vertex v : mask_to_vertices(p.x | p.z)) {
        if (!out.empty()) out += ' ';
        out += p.letter(v);
        out += std::to_string(v + 1);
    }
    return out.empty() ? "I" : out;
}

inline std::string to_string(const PauliString &p) { return phase_string(p.phase) + " · " + letters_string(p); }

/// phase x prod_v exp(-i alpha_v Z_v) x Pauli string.
///
/// Canonical form keeps every alpha_v in (-pi/4, pi/4]; whole multiples of
/// pi/2 are folded into the Pauli part using exp(-i pi/2 Z) = -iZ, and
/// entries below kAngleTolerance are dropped. Clifford twists therefore
/// vanish completely.
class RotatedPauliOp {
   public:
    RotatedPauliOp() = default;
    RotatedPauliOp(PauliString p) : pauli_(p) {}  // NOLINT(google-explicit-constructor)
    RotatedPauliOp(PauliString p, std::map<Vertex, double> twist) : pauli_(p), twist_(std::move(twist)) {
        canonicalize();
    }

    /// exp(-i theta Z_v) X_v.
    static RotatedPauliOp rotated_x(Vertex v, double theta) {
        return RotatedPauliOp(PauliString::X(v), {{v, theta}});
    }

    const PauliString &pauli() const { return pauli_; }
    const std::map<Vertex, double> &twist() const { return twist_; }
    bool has_twist() const { return !twist_.empty(); }

    VertexMask support() const {
        VertexMask m = pauli_.support();
        for (auto &[v, a] : twist_) m |= bit(v);
        return m;
    }
    int degree() const { return popcount(support()); }

    RotatedPauliOp negated() const {
        RotatedPauliOp r = *this;
        r.pauli_ = pauli_.negated();
        return r;
    }

    friend RotatedPauliOp operator*(const RotatedPauliOp &a, const RotatedPauliOp &b) {
        // a.P * exp(-i beta Z_v) = exp(-i (+-beta) Z_v) * a.P, sign flipped where a.P has X or Y.
        std::map<Vertex, double> twist = a.twist_;
        for (auto &[v, beta] : b.twist_) twist[v] += contains(a.pauli_.x, v) ? -beta : beta;
        RotatedPauliOp r;
        r.pauli_ = a.pauli_ * b.pauli_;
        r.twist_ = std::move(twist);
        r.canonicalize();
        return r;
    }

    /// Equality up to 1e-10 on twist angles.
    bool operator==(const RotatedPauliOp &o) const {
        if (!(pauli_ == o.pauli_) || twist_.size() != o.twist_.size()) return false;
        for (auto it = twist_.begin(), jt = o.twist_.begin(); it != twist_.end(); ++it, ++jt) {
            if (it->first != jt->first || std::abs(it->second - jt->second) > 1e-10) return false;
        }
        return true;
    }

   private:
    void canonicalize() {
        constexpr double quarter = std::numbers::pi / 4;
        constexpr double half = std::numbers::pi / 2;
        for (auto it = twist_.begin(); it != twist_.end();) {
            Vertex v = it->first;
            double a = it->second;
            long k = std::lround(a / half);
            a -= static_cast<double>(k) * half;
            if (a <= -quarter + kAngleTolerance) {
                a += half;
                k -= 1;
            }
            int km = static_cast<int>(((k % 4) + 4) % 4);
            if (km != 0) {
                // exp(-i k pi/2 Z) = (-i)^k Z^k, placed left of the Pauli part.
                PauliString zk = (km & 1) ? PauliString::Z(v) : PauliString::identity();
                zk.phase = static_cast<std::uint8_t>((4 - km) % 4);
                pauli_ = zk * pauli_;
            }
            if (std::abs(a) < kAngleTolerance) {
                it = twist_.erase(it);
            } else {
                it->second = a;
                ++it;
            }
        }
    }

    PauliString pauli_;
    std::map<Vertex, double> twist_;
};

enum class Commutation { Commute, Anticommute, Neither };

inline const char *commutation_name(Commutation c) {
    switch (c) {
        case Commutation::Commute: return "commute";
        case Commutation::Anticommute: return "anticommute";
        case Commutation::Neither: return "neither";
    }
    return "?";
}

inline Commutation commutes(const RotatedPauliOp &a, const RotatedPauliOp &b) {
    if (!a.has_twist() && !b.has_twist())
        return anticommutes(a.pauli(), b.pauli()) ? Commutation::Anticommute : Commutation::Commute;
    RotatedPauliOp ab = a * b, ba = b * a;
    if (ab == ba) return Commutation::Commute;
    if (ab == ba.negated()) return Commutation::Anticommute;
    return Commutation::Neither;
}

/// Sites acted on non-trivially (Pauli letter or twist).
inline VertexMask support(const RotatedPauliOp &op) { return op.support(); }

/// Canonical text, e.g. "+1 · Z1 X2 Z3 · twist{2: 0.7854}".
inline std::string to_string(const RotatedPauliOp &op) {
    std::string out = to_string(op.pauli());
    if (op.has_twist()) {
        out += " · twist{";
        bool first = true;
        for (auto &[v, a] : op.twist()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%zu: %.4f", first ? "" : ", ", v + 1, a);
            out += buf;
            first = false;
        }
        out += "}";
    }
    return out;
}

/// Action on a computational basis state: op|b> = coefficient * |b ^ flip>.
struct MonomialAction {
    VertexMask flip;
    std::complex<double> coefficient;
};

inline MonomialAction apply_to_basis(const RotatedPauliOp &op, VertexMask b) {
    const PauliString &p = op.pauli();
    // sigma(x, z) on site bit b: Z -> (-1)^b, Y -> i (-1)^b, X -> 1.
    int k = p.phase + popcount(p.x & p.z) + 2 * popcount(p.z & b);
    std::complex<double> c = i_pow(k);
    VertexMask out = b ^ p.x;
    double arg = 0;
    for (auto &[v, a] : op.twist()) arg += contains(out, v) ? a : -a;
    if (arg != 0) c *= std::polar(1.0, arg);
    return {p.x, c};
}

}  // namespace agqc
