#pragma once

#include "bratteli/rational.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bratteli {

/// Discrete abelian groups with exact elements: the lattice Z^d under addition
/// or the positive rationals under multiplication.
class GroupSpec {
public:
    enum class Kind { Lattice, PositiveRationals };

    static GroupSpec lattice(int dimension);
    static GroupSpec positive_rationals();

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
    Kind kind_ = Kind::Lattice;
    int dimension_ = 1;
};

/// An element of a GroupSpec. The product is written multiplicatively for both
/// kinds (`*` is vector addition on Z^d).
class GroupElement {
public:
    using Lattice = std::vector<std::int64_t>;

    explicit GroupElement(Lattice v) : value_(std::move(v)) {}
    explicit GroupElement(Rational q);

    static GroupElement identity(const GroupSpec& g);
    static GroupElement integer(std::int64_t k) { return GroupElement(Lattice{k}); }

    bool is_lattice() const { return std::holds_alternative<Lattice>(value_); }
    const Lattice& coordinates() const { return std::get<Lattice>(value_); }
    const Rational& ratio() const { return std::get<Rational>(value_); }

    bool belongs_to(const GroupSpec& g) const;

    GroupElement operator*(const GroupElement& other) const;
    GroupElement inverse() const;

    /// "3" for Z, "(1,-2)" for Z^d with d > 1, "num/den" for rationals.
    std::string to_string() const;

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value_ == b.value_; }
    /// Lattice: lexicographic on coordinates. Rationals: numeric.
    friend bool operator<(const GroupElement& a, const GroupElement& b);

private:
    std::variant<Lattice, Rational> value_;
};

/// Parses one element of `g`: an integer or "(a,b,...)" / "a,b,..." for the
/// lattice, "num/den" for rationals. Throws ParseError.
GroupElement parse_group_element(const GroupSpec& g, std::string_view text);

/// Parses a ';'-separated list of elements.
std::vector<GroupElement> parse_group_elements(const GroupSpec& g, std::string_view text);

} // namespace bratteli
