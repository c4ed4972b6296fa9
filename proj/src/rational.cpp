#include "bratteli/rational.hpp"

#include "bratteli/errors.hpp"

#include <cctype>
#include <cmath>

namespace bratteli {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty())
        return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (s[0] == '+')
        s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    if (!is_integer_literal(num))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    if (slash == std::string_view::npos)
        return Rational(parse_integer(num));
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class d = parse_integer(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(parse_integer(num), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational binomial(unsigned n, unsigned k) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, k);
    return Rational(c);
}

Rational rationalize(double x, unsigned long max_den) {
    if (!std::isfinite(x))
        throw DomainError("rationalize", "non-finite value");
    const bool negative = x < 0;
    double rest = std::fabs(x);
    // Convergents h/k of the continued fraction of |x|.
    mpz_class h_prev = 1, h = static_cast<unsigned long>(std::floor(rest));
    mpz_class k_prev = 0, k = 1;
    rest -= std::floor(rest);
    while (rest > 1e-18) {
        rest = 1.0 / rest;
        const double a_d = std::floor(rest);
        if (a_d > 1e15)
            break;
        const mpz_class a = static_cast<unsigned long>(a_d);
        const mpz_class k_next = a * k + k_prev;
        if (k_next > max_den) {
            // Largest semiconvergent that still fits.
            const mpz_class m = (mpz_class(max_den) - k_prev) / k;
            if (2 * m >= a) {
                const mpz_class hs = m * h + h_prev, ks = m * k + k_prev;
                const double target = std::fabs(x);
                const double err_semi = std::fabs(hs.get_d() / ks.get_d() - target);
                const double err_conv = std::fabs(h.get_d() / k.get_d() - target);
                if (err_semi < err_conv) {
                    h = hs;
                    k = ks;
                }
            }
            break;
        }
        const mpz_class h_next = a * h + h_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        rest -= a_d;
    }
    Rational q(h, k);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

} // namespace bratteli
