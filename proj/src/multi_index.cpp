#include "fdiff/multi_index.hpp"

#include "fdiff/error.hpp"

namespace fdiff {

MultiIndex::MultiIndex(std::size_t n_vars) : n_(static_cast<std::uint8_t>(n_vars)) {
    if (n_vars == 0 || n_vars > kMaxVars) {
        throw PreconditionError("number of variables must be in 1.." + std::to_string(kMaxVars));
    }
}

MultiIndex::MultiIndex(std::initializer_list<unsigned> exps) : MultiIndex(exps.size()) {
    std::size_t i = 0;
    for (unsigned e : exps) set(i++, e);
}

MultiIndex MultiIndex::unit(std::size_t n_vars, std::size_t var) {
    MultiIndex m(n_vars);
    m.set(var, 1);
    return m;
}

void MultiIndex::set(std::size_t i, unsigned v) {
    if (i >= n_) throw PreconditionError("variable index out of range");
    if (v > 255) throw PreconditionError("exponent too large");
    degree_ = degree_ - e_[i] + v;
    e_[i] = static_cast<std::uint8_t>(v);
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < n_; ++i) r.set(i, e_[i] + o.e_[i]);
    return r;
}

std::optional<MultiIndex> MultiIndex::minus(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (std::size_t i = 0; i < n_; ++i) {
        if (o.e_[i] > e_[i]) return std::nullopt;
        r.set(i, e_[i] - o.e_[i]);
    }
    return r;
}

bool MultiIndex::divides(const MultiIndex& o) const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (e_[i] > o.e_[i]) return false;
    }
    return true;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (a.e_[i] != b.e_[i]) return b.e_[i] <=> a.e_[i];
    }
    return a.n_ <=> b.n_;
}

std::size_t MultiIndex::hash() const {
    std::size_t h = n_;
    for (auto e : e_) h = h * 131u + e;
    return h;
}

std::size_t monomial_count(std::size_t n_vars, unsigned max_degree) {
    // C(max_degree + n, n)
    std::size_t c = 1;
    for (std::size_t k = 1; k <= n_vars; ++k) c = c * (max_degree + k) / k;
    return c;
}

}  // namespace fdiff
