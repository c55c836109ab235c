#pragma once

#include <tbm/dataset.hpp>
#include <tbm/miner.hpp>
#include <tbm/pattern.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace tbm {

/// The reduced outcome set S. Always contains ⊥, which sits at index 0; the
/// rest follow in canonical order (cardinality, then lexicographic).
class SampleSpace
{
public:
    SampleSpace();
    explicit SampleSpace(std::vector<Pattern> outcomes);

    std::size_t size() const noexcept { return outcomes_.size(); }
    const Pattern& operator[](std::size_t i) const { return outcomes_[i]; }
    const std::vector<Pattern>& outcomes() const noexcept { return outcomes_; }

    std::optional<std::size_t> find(const Pattern& x) const;
    bool contains(const Pattern& x) const { return find(x).has_value(); }

    friend bool operator==(const SampleSpace& a, const SampleSpace& b)
    {
        return a.outcomes_ == b.outcomes_;
    }

private:
    std::vector<Pattern> outcomes_;
    std::unordered_map<Pattern, std::uint32_t> index_;
};

/// S = B ∪ unique(D) ∪ {⊥}.
SampleSpace build_sample_space(const ParameterDomain& b, const TransactionDataset& d);

/// Two views of the relation ζ(s, x) = 1 between parameters and outcomes.
struct Incidence
{
    /// Per parameter s: outcomes x ∈ S with s ⊆ x, ascending.
    std::vector<std::vector<std::uint32_t>> up_sets;
    /// Per outcome x: parameters s with s ⊆ x, ascending.
    std::vector<std::vector<std::uint32_t>> members;

    std::size_t total() const noexcept;
    void erase_parameter(std::size_t i);
};

/// Built from an item -> outcomes inverted index restricted to items that occur
/// in some parameter, so the cost does not depend on the size of the universe.
Incidence build_incidence(const SampleSpace& space, std::span<const Pattern> parameters);

} // namespace tbm
