#include "bratteli/group.hpp"

#include "bratteli/errors.hpp"

#include <charconv>

namespace bratteli {

GroupSpec GroupSpec::lattice(int dimension) {
    if (dimension < 1)
        throw DomainError("group", "lattice dimension must be at least 1");
    GroupSpec g;
    g.kind_ = Kind::Lattice;
    g.dimension_ = dimension;
    return g;
}

GroupSpec GroupSpec::positive_rationals() {
    GroupSpec g;
    g.kind_ = Kind::PositiveRationals;
    g.dimension_ = 0;
    return g;
}

GroupElement::GroupElement(Rational q) : value_(std::move(q)) {
    if (sgn(ratio()) <= 0)
        throw DomainError("group", "multiplicative group element must be positive");
}

GroupElement GroupElement::identity(const GroupSpec& g) {
    if (g.kind() == GroupSpec::Kind::Lattice)
        return GroupElement(Lattice(g.dimension(), 0));
    return GroupElement(Rational(1));
}

bool GroupElement::belongs_to(const GroupSpec& g) const {
    if (g.kind() == GroupSpec::Kind::Lattice)
        return is_lattice() && static_cast<int>(coordinates().size()) == g.dimension();
    return !is_lattice();
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
    if (is_lattice() != other.is_lattice())
        throw DomainError("group", "mixing lattice and rational elements");
    if (!is_lattice())
        return GroupElement(Rational(ratio() * other.ratio()));
    const auto& a = coordinates();
    const auto& b = other.coordinates();
    if (a.size() != b.size())
        throw DomainError("group", "lattice dimensions differ");
    Lattice sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        sum[i] = a[i] + b[i];
    return GroupElement(std::move(sum));
}

GroupElement GroupElement::inverse() const {
    if (!is_lattice())
        return GroupElement(Rational(1 / ratio()));
    Lattice neg = coordinates();
    for (auto& x : neg)
        x = -x;
    return GroupElement(std::move(neg));
}

std::string GroupElement::to_string() const {
    if (!is_lattice())
        return bratteli::to_string(ratio());
    const auto& c = coordinates();
    if (c.size() == 1)
        return std::to_string(c[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(c[i]);
    }
    return out + ")";
}

bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.is_lattice() != b.is_lattice())
        return a.is_lattice();
    if (a.is_lattice())
        return a.coordinates() < b.coordinates();
    return a.ratio() < b.ratio();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("malformed integer '" + std::string(s) + "'");
    return out;
}

} // namespace

GroupElement parse_group_element(const GroupSpec& g, std::string_view text) {
    text = trim(text);
    if (g.kind() == GroupSpec::Kind::PositiveRationals) {
        const Rational q = parse_rational(text);
        if (sgn(q) <= 0)
            throw ParseError("group element must be positive: '" + std::string(text) + "'");
        return GroupElement(q);
    }
    if (!text.empty() && text.front() == '(') {
        if (text.back() != ')')
            throw ParseError("unbalanced parenthesis in '" + std::string(text) + "'");
        text = text.substr(1, text.size() - 2);
    }
    GroupElement::Lattice coords;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        coords.push_back(parse_int(text.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (static_cast<int>(coords.size()) != g.dimension())
        throw ParseError("expected " + std::to_string(g.dimension()) + " coordinates in '" + std::string(text) + "'");
    return GroupElement(std::move(coords));
}

std::vector<GroupElement> parse_group_elements(const GroupSpec& g, std::string_view text) {
    std::vector<GroupElement> out;
    std::size_t start = 0;
    while (true) {
        const auto semi = text.find(';', start);
        const auto piece = trim(text.substr(start, semi - start));
        if (!piece.empty())
            out.push_back(parse_group_element(g, piece));
        if (semi == std::string_view::npos)
            break;
        start = semi + 1;
    }
    if (out.empty())
        throw ParseError("empty group element list");
    return out;
}

} // namespace bratteli
