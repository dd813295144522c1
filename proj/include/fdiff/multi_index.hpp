#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>

namespace fdiff {

inline constexpr std::size_t kMaxVars = 8;

/// Exponent vector of a monomial z1^e1 ... zn^en.
///
/// Ordered graded-lexicographically: lower total degree first; within a
/// degree, larger exponent of z1 first, then z2, ... (so x^2 < x*y < y^2).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n_vars);
    MultiIndex(std::initializer_list<unsigned> exps);

    static MultiIndex unit(std::size_t n_vars, std::size_t var);

    std::size_t n_vars() const { return n_; }
    unsigned degree() const { return degree_; }
    unsigned operator[](std::size_t i) const { return e_[i]; }
    void set(std::size_t i, unsigned v);

    MultiIndex operator+(const MultiIndex& o) const;
    /// Componentwise difference, empty if any component would go negative.
    std::optional<MultiIndex> minus(const MultiIndex& o) const;
    bool divides(const MultiIndex& o) const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.n_ == b.n_ && a.e_ == b.e_;
    }
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

    std::size_t hash() const;

private:
    std::array<std::uint8_t, kMaxVars> e_{};
    std::uint8_t n_ = 0;
    unsigned degree_ = 0;
};

/// Number of monomials of degree <= d in n variables.
std::size_t monomial_count(std::size_t n_vars, unsigned max_degree);

}  // namespace fdiff
