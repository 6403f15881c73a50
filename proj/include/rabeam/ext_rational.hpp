#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rabeam {

/// Norm order in [1, inf]: either a reduced positive fraction or the
/// distinct infinity token. Never a float sentinel.
class ExtRational {
  public:
    ExtRational(std::int64_t num, std::int64_t den = 1)
    {
        if (num <= 0 || den <= 0)
            throw std::invalid_argument("ExtRational: numerator and denominator must be positive");
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
        if (num_ < den_)
            throw std::invalid_argument("ExtRational: value must be >= 1");
    }

    static ExtRational infinity()
    {
        ExtRational r;
        r.num_ = 0;
        r.den_ = 0;
        return r;
    }

    bool is_infinite() const { return den_ == 0; }
    bool is_one() const { return !is_infinite() && num_ == den_; }
    bool is_two() const { return !is_infinite() && num_ == 2 * den_; }

    std::int64_t num() const
    {
        if (is_infinite())
            throw std::logic_error("ExtRational: infinity has no numerator");
        return num_;
    }
    std::int64_t den() const
    {
        if (is_infinite())
            throw std::logic_error("ExtRational: infinity has no denominator");
        return den_;
    }

    double value() const
    {
        if (is_infinite())
            return std::numeric_limits<double>::infinity();
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// Conjugate exponent: 1/p + 1/p* = 1, with conj(1) = inf and conj(inf) = 1.
    ExtRational conjugate() const
    {
        if (is_infinite())
            return ExtRational(1);
        if (is_one())
            return infinity();
        return ExtRational(num_, num_ - den_);
    }

    friend bool operator==(const ExtRational& a, const ExtRational& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }

    /// "1", "2", "3/2" or "inf"; parse() accepts the same forms.
    std::string str() const
    {
        if (is_infinite())
            return "inf";
        if (den_ == 1)
            return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    static std::optional<ExtRational> parse(std::string_view text)
    {
        if (text == "inf" || text == "Inf" || text == "infinity")
            return infinity();
        const auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) {
                // Accept a plain decimal like "1.5" as a convenience.
                const auto dot = text.find('.');
                if (dot != std::string_view::npos) {
                    std::int64_t whole = std::stoll(std::string(text.substr(0, dot)));
                    const std::string frac(text.substr(dot + 1));
                    if (frac.empty() || frac.size() > 9)
                        return std::nullopt;
                    std::int64_t den = 1;
                    for (std::size_t i = 0; i < frac.size(); ++i)
                        den *= 10;
                    return ExtRational(whole * den + std::stoll(frac), den);
                }
                return ExtRational(std::stoll(std::string(text)));
            }
            const std::int64_t num = std::stoll(std::string(text.substr(0, slash)));
            const std::int64_t den = std::stoll(std::string(text.substr(slash + 1)));
            return ExtRational(num, den);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

  private:
    ExtRational() = default;

    std::int64_t num_ = 1;
    std::int64_t den_ = 1;
};

} // namespace rabeam
