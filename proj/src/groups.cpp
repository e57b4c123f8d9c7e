#include "gconn/groups.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gconn {

namespace {

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi; // fmod(-eps) + 2pi can round up to 2pi
    return r;
}

[[noreturn]] void throw_kind_mismatch(const GroupElement& a, const GroupElement& b) {
    std::string msg = "group elements have incompatible kinds: ";
    msg += kind_name(a.kind());
    msg += " vs ";
    msg += kind_name(b.kind());
    if (a.kind() == GroupKind::CyclicZ && b.kind() == GroupKind::CyclicZ) {
        msg += " (orders " + std::to_string(a.as_zn().order) + " vs " + std::to_string(b.as_zn().order) + ")";
    }
    throw KindMismatch(msg);
}

} // namespace

const char* kind_name(GroupKind kind) {
    switch (kind) {
        case GroupKind::CyclicZ: return "zn";
        case GroupKind::CircleU1: return "u1";
        case GroupKind::SpecialUnitary2: return "su2";
    }
    return "?";
}

GroupDescriptor GroupDescriptor::cyclic(std::uint64_t n, double tol) {
    if (n < 2) throw Error("CyclicZ order must be >= 2, got " + std::to_string(n));
    if (tol <= 0.0) throw Error("approx_tolerance must be positive");
    return GroupDescriptor{GroupKind::CyclicZ, n, tol};
}

GroupDescriptor GroupDescriptor::circle(double tol) {
    if (tol <= 0.0) throw Error("approx_tolerance must be positive");
    return GroupDescriptor{GroupKind::CircleU1, 0, tol};
}

GroupDescriptor GroupDescriptor::special_unitary2(double tol) {
    if (tol <= 0.0) throw Error("approx_tolerance must be positive");
    return GroupDescriptor{GroupKind::SpecialUnitary2, 0, tol};
}

GroupElement GroupElement::zn(std::uint64_t order, std::uint64_t residue) {
    if (order < 2) throw Error("CyclicZ order must be >= 2");
    if (residue >= order) throw Error("residue " + std::to_string(residue) + " out of range for Z_" + std::to_string(order));
    return GroupElement(ZnValue{order, residue});
}

GroupElement GroupElement::u1(double angle) {
    if (!std::isfinite(angle)) throw Error("U(1) angle must be finite");
    return GroupElement(U1Value{wrap_angle(angle)});
}

GroupElement GroupElement::su2(double w, double x, double y, double z, double tol) {
    const double norm2 = w * w + x * x + y * y + z * z;
    if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 2.0 * tol) {
        throw Error("SU(2) quaternion must have unit norm (|q|^2 = " + std::to_string(norm2) + ")");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    return GroupElement(Su2Value{w * inv, x * inv, y * inv, z * inv});
}

GroupKind GroupElement::kind() const {
    switch (value_.index()) {
        case 0: return GroupKind::CyclicZ;
        case 1: return GroupKind::CircleU1;
        default: return GroupKind::SpecialUnitary2;
    }
}

const ZnValue& GroupElement::as_zn() const {
    if (const auto* v = std::get_if<ZnValue>(&value_)) return *v;
    throw KindMismatch("element is not a Z_N value");
}

const U1Value& GroupElement::as_u1() const {
    if (const auto* v = std::get_if<U1Value>(&value_)) return *v;
    throw KindMismatch("element is not a U(1) value");
}

const Su2Value& GroupElement::as_su2() const {
    if (const auto* v = std::get_if<Su2Value>(&value_)) return *v;
    throw KindMismatch("element is not an SU(2) value");
}

GroupElement identity(const GroupDescriptor& desc) {
    switch (desc.kind) {
        case GroupKind::CyclicZ: return GroupElement::zn(desc.order, 0);
        case GroupKind::CircleU1: return GroupElement::u1(0.0);
        case GroupKind::SpecialUnitary2: return GroupElement::su2(1.0, 0.0, 0.0, 0.0);
    }
    throw Error("unreachable");
}

GroupElement identity_like(const GroupElement& g) { return identity(descriptor_of(g)); }

GroupDescriptor descriptor_of(const GroupElement& g, double tol) {
    switch (g.kind()) {
        case GroupKind::CyclicZ: return GroupDescriptor::cyclic(g.as_zn().order, tol);
        case GroupKind::CircleU1: return GroupDescriptor::circle(tol);
        case GroupKind::SpecialUnitary2: return GroupDescriptor::special_unitary2(tol);
    }
    throw Error("unreachable");
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
    if (a.kind() != b.kind()) throw_kind_mismatch(a, b);
    switch (a.kind()) {
        case GroupKind::CyclicZ: {
            const auto& za = a.as_zn();
            const auto& zb = b.as_zn();
            if (za.order != zb.order) throw_kind_mismatch(a, b);
            return GroupElement::zn(za.order, (za.residue + zb.residue) % za.order);
        }
        case GroupKind::CircleU1:
            return GroupElement::u1(a.as_u1().angle + b.as_u1().angle);
        case GroupKind::SpecialUnitary2: {
            const auto& p = a.as_su2();
            const auto& q = b.as_su2();
            return GroupElement::su2(p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
                                     p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
                                     p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
                                     p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
                                     1e-6);
        }
    }
    throw Error("unreachable");
}

GroupElement invert(const GroupElement& g) {
    switch (g.kind()) {
        case GroupKind::CyclicZ: {
            const auto& z = g.as_zn();
            return GroupElement::zn(z.order, z.residue == 0 ? 0 : z.order - z.residue);
        }
        case GroupKind::CircleU1: {
            const double a = g.as_u1().angle;
            return GroupElement::u1(a == 0.0 ? 0.0 : kTwoPi - a);
        }
        case GroupKind::SpecialUnitary2: {
            const auto& q = g.as_su2();
            return GroupElement::su2(q.w, -q.x, -q.y, -q.z);
        }
    }
    throw Error("unreachable");
}

GroupElement signed_power(const GroupElement& g, int sign) { return sign >= 0 ? g : invert(g); }

bool approx_equal(const GroupElement& a, const GroupElement& b, double tol) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case GroupKind::CyclicZ:
            return a.as_zn().order == b.as_zn().order && a.as_zn().residue == b.as_zn().residue;
        case GroupKind::CircleU1: {
            const double d = std::abs(a.as_u1().angle - b.as_u1().angle);
            return std::min(d, kTwoPi - d) <= tol;
        }
        case GroupKind::SpecialUnitary2: {
            const auto& p = a.as_su2();
            const auto& q = b.as_su2();
            return std::abs(p.w - q.w) <= tol && std::abs(p.x - q.x) <= tol &&
                   std::abs(p.y - q.y) <= tol && std::abs(p.z - q.z) <= tol;
        }
    }
    return false;
}

GroupElement haar_sample(const GroupDescriptor& desc, RngStream& rng) {
    switch (desc.kind) {
        case GroupKind::CyclicZ:
            return GroupElement::zn(desc.order, rng.uniform_below(desc.order));
        case GroupKind::CircleU1:
            return GroupElement::u1(kTwoPi * rng.uniform01());
        case GroupKind::SpecialUnitary2: {
            // Four standard normals on the unit 3-sphere are exactly Haar.
            for (;;) {
                const double w = rng.normal();
                const double x = rng.normal();
                const double y = rng.normal();
                const double z = rng.normal();
                const double norm = std::sqrt(w * w + x * x + y * y + z * z);
                if (norm > 1e-12) {
                    return GroupElement::su2(w / norm, x / norm, y / norm, z / norm);
                }
            }
        }
    }
    throw Error("unreachable");
}

std::vector<GroupElement> enumerate_elements(const GroupDescriptor& desc) {
    if (!desc.is_finite()) {
        throw NotFinite(std::string(kind_name(desc.kind)) + " is not a finite group");
    }
    std::vector<GroupElement> out;
    out.reserve(desc.order);
    for (std::uint64_t r = 0; r < desc.order; ++r) out.push_back(GroupElement::zn(desc.order, r));
    return out;
}

bool is_trivial_label(const GroupDescriptor& desc, CharLabel label) {
    if (desc.kind == GroupKind::CyclicZ) {
        const auto n = static_cast<long long>(desc.order);
        return ((label % n) + n) % n == 0;
    }
    return label == 0;
}

Complex character(const GroupDescriptor& desc, CharLabel label, const GroupElement& g) {
    switch (desc.kind) {
        case GroupKind::CyclicZ: {
            const auto& z = g.as_zn();
            if (z.order != desc.order) throw KindMismatch("element order does not match descriptor");
            const auto n = static_cast<long long>(desc.order);
            const long long k = ((label % n) + n) % n;
            // k*r mod N in 128-bit to stay exact for any N
            const auto kr = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(k) * z.residue) % desc.order);
            return std::polar(1.0, kTwoPi * static_cast<double>(kr) / static_cast<double>(desc.order));
        }
        case GroupKind::CircleU1:
            return std::polar(1.0, static_cast<double>(label) * g.as_u1().angle);
        case GroupKind::SpecialUnitary2: {
            if (label < 0) throw InvalidLabel("SU(2) spin label must satisfy 2j >= 0, got 2j = " + std::to_string(label));
            const auto m = label; // m = 2j; chi_j = U_m(cos theta)
            const double c = std::clamp(g.as_su2().w, -1.0, 1.0);
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            if (s >= 1e-6) {
                const double theta = std::acos(c);
                return Complex(std::sin(static_cast<double>(m + 1) * theta) / std::sin(theta), 0.0);
            }
            // Chebyshev U_m recurrence; avoids the sin/sin cancellation at theta ~ 0, pi
            double um2 = 1.0;       // U_0
            double um1 = 2.0 * c;   // U_1
            if (m == 0) return Complex(um2, 0.0);
            for (long long i = 2; i <= m; ++i) {
                const double um = 2.0 * c * um1 - um2;
                um2 = um1;
                um1 = um;
            }
            return Complex(um1, 0.0);
        }
    }
    throw Error("unreachable");
}

FundamentalRep fundamental_matrix(const GroupElement& g) {
    switch (g.kind()) {
        case GroupKind::CyclicZ: {
            const auto& z = g.as_zn();
            const Complex v = std::polar(1.0, kTwoPi * static_cast<double>(z.residue) / static_cast<double>(z.order));
            return FundamentalRep{1, {v, 0.0, 0.0, 0.0}};
        }
        case GroupKind::CircleU1:
            return FundamentalRep{1, {std::polar(1.0, g.as_u1().angle), 0.0, 0.0, 0.0}};
        case GroupKind::SpecialUnitary2: {
            const auto& q = g.as_su2();
            // q = w + x i + y j + z k as w*I + x*(i s1) + y*(i s2) + z*(i s3)
            return FundamentalRep{2,
                                  {Complex(q.w, q.z), Complex(q.y, q.x),
                                   Complex(-q.y, q.x), Complex(q.w, -q.z)}};
        }
    }
    throw Error("unreachable");
}

} // namespace gconn
