#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "gconn/errors.hpp"
#include "gconn/rng.hpp"

namespace gconn {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class GroupKind { CyclicZ, CircleU1, SpecialUnitary2 };

const char* kind_name(GroupKind kind);

/// Which compact group a scenario works over. `order` is the N of Z_N and is
/// ignored for the Lie kinds.
struct GroupDescriptor {
    GroupKind kind = GroupKind::CyclicZ;
    std::uint64_t order = 2;
    double approx_tolerance = 1e-9;

    static GroupDescriptor cyclic(std::uint64_t n, double tol = 1e-9);
    static GroupDescriptor circle(double tol = 1e-9);
    static GroupDescriptor special_unitary2(double tol = 1e-9);

    bool is_finite() const { return kind == GroupKind::CyclicZ; }

    friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) {
        return a.kind == b.kind && (a.kind != GroupKind::CyclicZ || a.order == b.order);
    }
};

struct ZnValue {
    std::uint64_t order;
    std::uint64_t residue;
};

struct U1Value {
    double angle; // [0, 2pi)
};

struct Su2Value {
    double w, x, y, z; // unit quaternion
};

/// One element of Z_N, U(1) or SU(2), tagged by kind. Immutable value type.
class GroupElement {
public:
    static GroupElement zn(std::uint64_t order, std::uint64_t residue);
    static GroupElement u1(double angle);
    /// Validates |q| = 1 within tol and renormalizes.
    static GroupElement su2(double w, double x, double y, double z, double tol = 1e-9);

    GroupKind kind() const;
    const ZnValue& as_zn() const;
    const U1Value& as_u1() const;
    const Su2Value& as_su2() const;

private:
    explicit GroupElement(std::variant<ZnValue, U1Value, Su2Value> v) : value_(std::move(v)) {}
    std::variant<ZnValue, U1Value, Su2Value> value_;
};

GroupElement identity(const GroupDescriptor& desc);
GroupElement identity_like(const GroupElement& g);
GroupDescriptor descriptor_of(const GroupElement& g, double tol = 1e-9);

/// Group product a*b. Throws KindMismatch when the operands live in
/// different groups (including Z_N of different order).
GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement invert(const GroupElement& g);
/// g for sign +1, g^{-1} for sign -1.
GroupElement signed_power(const GroupElement& g, int sign);

bool approx_equal(const GroupElement& a, const GroupElement& b, double tol = 1e-9);

/// One draw from the normalized Haar measure.
GroupElement haar_sample(const GroupDescriptor& desc, RngStream& rng);

/// All N elements in ascending residue order. Throws NotFinite for the Lie kinds.
std::vector<GroupElement> enumerate_elements(const GroupDescriptor& desc);

/// Irreducible-character labels, one integer per kind:
///   CyclicZ          k   (chi_k(r) = exp(2 pi i k r / N), any integer, taken mod N)
///   CircleU1         n   (chi_n(theta) = exp(i n theta))
///   SpecialUnitary2  2j  (twice the spin; chi_j = sin((2j+1)theta)/sin(theta))
using CharLabel = long long;

bool is_trivial_label(const GroupDescriptor& desc, CharLabel label);
Complex character(const GroupDescriptor& desc, CharLabel label, const GroupElement& g);

/// Fundamental (defining) representation matrix, row-major dim x dim with
/// dim = 1 for the abelian kinds and 2 for SU(2).
struct FundamentalRep {
    int dim;
    std::array<Complex, 4> entries;

    Complex at(int row, int col) const { return entries[static_cast<std::size_t>(row * dim + col)]; }
};

FundamentalRep fundamental_matrix(const GroupElement& g);

} // namespace gconn
