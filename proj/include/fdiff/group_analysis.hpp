#pragma once

#include "fdiff/formal_maps.hpp"
#include "fdiff/matrix.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdiff {

/// Matrix of the right action [phi] -> [phi o f] on the jets of functions
/// vanishing at 0, in the graded-lex basis of monomials of degree 1..N.
/// Column j holds the coefficients of m_j o f, so
/// jet_matrix(f o g) = jet_matrix(g) * jet_matrix(f).
Matrix jet_matrix(const Diffeo& f);
/// The monomial basis used by jet_matrix.
std::vector<MultiIndex> jet_basis(std::size_t n_vars, unsigned order);

/// A finitely generated subgroup together with the search bounds.
struct GroupSpec {
    std::vector<Diffeo> generators;
    /// Maximum word length in the breadth-first enumeration.
    unsigned word_bound = 4;
    /// Maximum depth of the derived and lower central series probes.
    unsigned depth_bound = 3;
    /// Maximum number of new elements kept per enumeration level, and the
    /// size of each series pool.
    std::size_t level_cap = 48;

    GroupSpec() = default;
    explicit GroupSpec(std::vector<Diffeo> gens, unsigned word_bound = 4, unsigned depth_bound = 3);
    /// Throws PreconditionError on an empty list and MismatchError when the
    /// generators disagree in dimension or order.
    void validate() const;
    std::size_t n_vars() const { return generators.front().n_vars(); }
    unsigned order() const { return generators.front().order(); }
};

/// A word over the generators g1, g2, ... and its value.
///
/// Grammar: word = factor {"*" factor}; factor = atom ["^" int];
/// atom = "id" | "g" int | "[" word "," word "]" | "(" word ")".
/// a*b evaluates to a o b and [a,b] to a o b o a^-1 o b^-1.
struct Element {
    std::string word;
    Diffeo value;
};

Diffeo evaluate_word(const GroupSpec& spec, const std::string& word);

/// Distinct elements of word length 1..word_bound, shortest words first,
/// identity excluded. Each level keeps at most level_cap new elements.
std::vector<Element> enumerate_words(const GroupSpec& spec);

enum class Verdict { Proved, Refuted, Inconclusive };
std::string to_string(Verdict v);

struct Certificate {
    Verdict verdict = Verdict::Inconclusive;
    /// A word whose value is not the identity, when the verdict rests on one.
    std::optional<Element> witness;
    std::vector<std::pair<std::string, std::string>> detail;

    void note(std::string key, std::string value) { detail.emplace_back(std::move(key), std::move(value)); }
    /// Value of a detail entry, empty if absent.
    std::string get(const std::string& key) const;
};

/// Exact: generators commute pairwise iff the group is abelian.
Certificate is_abelian(const GroupSpec& spec);

/// Exact when every generator is tangent to the identity; otherwise
/// searches tangent-to-identity words up to the bounds for a non-commuting
/// pair and reports Inconclusive when none is found.
Certificate is_quasi_abelian(const GroupSpec& spec);

/// One certificate per depth d = 1..depth_bound: Refuted carries a
/// non-identity element of the d-th derived subgroup, Inconclusive means
/// no such element among iterated commutators of the bounded pool.
std::vector<Certificate> derived_series_probe(const GroupSpec& spec);
/// Same for the lower central series C^{d+1} = [G, C^d].
std::vector<Certificate> central_series_probe(const GroupSpec& spec);

struct ChainStep {
    std::string label;
    Diffeo value;
    TangencyOrder order;
};

/// f_1 = a, f_2 = b, f_j = [f_{j-1}, f_{j-2}] until f_j is the identity at
/// the jet order or max_steps elements have been produced.
std::vector<ChainStep> commutator_chain(const Diffeo& a, const Diffeo& b, std::size_t max_steps = 64);

/// Span of vector fields closed under the truncated bracket.
struct LieSpan {
    std::vector<VectorField> basis;
    /// Number of bracket rounds until the span stopped growing.
    unsigned closure_depth = 0;
};

/// Fields must vanish at 0 with a nilpotent linear part. Throws
/// PreconditionError when the span dimension exceeds max_dim.
LieSpan lie_closure(const std::vector<VectorField>& fields, std::size_t max_dim = 256);
/// Smallest l with the l-th derived algebra zero.
unsigned lie_derived_length(const LieSpan& span);
/// Dimension of the span of the given fields.
std::size_t span_dimension(const std::vector<VectorField>& fields);

/// Compares quasi-abelianity (at the bounds) with the existence of a
/// projective factor for every generator on X = log of a regular dicritic
/// generator. Proved when both sides agree, Refuted when they disagree.
/// Throws PreconditionError when no generator is regular dicritic.
Certificate theorem_c_check(const GroupSpec& spec);

/// For tangent-to-identity generators with a dicritic one of order k:
/// compares abelianity with all enumerated non-identity words having
/// tangency order k, and records a lower central series probe. Proved when
/// both sides agree.
Certificate theorem_d_check(const GroupSpec& spec);

/// Metabelian test for <f, lambda Id>: whether [f, h^2] and [f^2, h] commute
/// with [f, h]. When they do, records log([f, h]) and the projective
/// factors of f and h on it. h = Id is the trivial case.
Certificate corollary_9_3_check(const Diffeo& f, const Diffeo& h);

/// For a regular dicritic f commuting with every generator: compares
/// "G abelian" with "linear parts commute and log f is invariant by every
/// generator". Proved when both sides agree.
Certificate dicritic_centralizer_check(const GroupSpec& spec, const Diffeo& f);

/// Rows (s1, t1), (s2, t2) with g_* X = s1 X + t1 Y and g_* Y = s2 X + t2 Y,
/// if such constants exist. X and Y must commute and be linearly
/// independent over the constants.
std::optional<Matrix> metabelian_transform_matrix(const Diffeo& g, const VectorField& X, const VectorField& Y);

}  // namespace fdiff
