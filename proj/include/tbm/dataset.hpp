#pragma once

#include <tbm/pattern.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace tbm {

/// A multiset of patterns. Immutable after construction.
class TransactionDataset
{
public:
    using Entries = std::map<Pattern, std::uint64_t>;

    TransactionDataset() = default;

    /// Multiplicities must be positive; every identifier must be < n_variables.
    TransactionDataset(Entries entries, std::size_t n_variables);

    /// Aggregates a list of transactions. n_variables defaults to 1 + max id.
    static TransactionDataset from_transactions(const std::vector<Pattern>& transactions,
                                                std::optional<std::size_t> n_variables = {});

    const Entries& entries() const noexcept { return entries_; }
    std::size_t n_variables() const noexcept { return n_variables_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t unique_count() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return total_ == 0; }

    std::uint64_t multiplicity(const Pattern& x) const;

    /// Same transactions over a larger universe (appends never-occurring variables).
    TransactionDataset with_n_variables(std::size_t n) const;

    friend bool operator==(const TransactionDataset&, const TransactionDataset&) = default;

private:
    Entries entries_;
    std::size_t n_variables_ = 0;
    std::uint64_t total_ = 0;
};

struct ParseOptions
{
    /// Treat blank lines as observations of the empty pattern instead of skipping them.
    bool keep_empty = false;
};

/// FIMI format: one transaction per line, whitespace-separated non-negative
/// integers, LF or CRLF. Duplicate items within a line are collapsed.
TransactionDataset parse_fimi(std::istream& in, ParseOptions options = {});
TransactionDataset parse_fimi(std::string_view text, ParseOptions options = {});
TransactionDataset read_fimi_file(const std::filesystem::path& path, ParseOptions options = {});

/// Canonical order, one line per occurrence.
void write_fimi(std::ostream& out, const TransactionDataset& d);

/// Number of transactions (with multiplicity) containing x.
std::uint64_t support_count(const TransactionDataset& d, const Pattern& x);

/// η̂(x): fraction of transactions containing x.
double empirical_eta(const TransactionDataset& d, const Pattern& x);

/// p̂(x) = multiplicity(x) / N over the unique patterns of a dataset.
class EmpiricalDistribution
{
public:
    explicit EmpiricalDistribution(const TransactionDataset& d);

    const std::vector<std::pair<Pattern, double>>& support() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double probability(const Pattern& x) const;

private:
    std::vector<std::pair<Pattern, double>> probs_; // sorted by pattern
};

} // namespace tbm
