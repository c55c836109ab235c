#include <tbm/dataset.hpp>
#include <tbm/error.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace tbm {

TransactionDataset::TransactionDataset(Entries entries, std::size_t n_variables)
    : entries_(std::move(entries)), n_variables_(n_variables)
{
    for (const auto& [x, count] : entries_)
    {
        if (count == 0)
            throw std::invalid_argument("multiplicity of " + x.to_string() + " must be positive");
        if (!x.empty() && x.back() >= n_variables_)
            throw std::invalid_argument("pattern " + x.to_string() + " exceeds variable count " +
                                        std::to_string(n_variables_));
        total_ += count;
    }
}

TransactionDataset TransactionDataset::from_transactions(const std::vector<Pattern>& transactions,
                                                         std::optional<std::size_t> n_variables)
{
    Entries entries;
    std::size_t n = 0;
    for (const auto& t : transactions)
    {
        ++entries[t];
        if (!t.empty())
            n = std::max<std::size_t>(n, std::size_t{t.back()} + 1);
    }
    return TransactionDataset(std::move(entries), n_variables.value_or(n));
}

std::uint64_t TransactionDataset::multiplicity(const Pattern& x) const
{
    auto it = entries_.find(x);
    return it == entries_.end() ? 0 : it->second;
}

TransactionDataset TransactionDataset::with_n_variables(std::size_t n) const
{
    return TransactionDataset(entries_, n);
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

} // namespace

TransactionDataset parse_fimi(std::istream& in, ParseOptions options)
{
    TransactionDataset::Entries entries;
    std::size_t n = 0;
    std::size_t line_no = 0;
    bool any_line = false;
    std::string line;
    std::vector<Item> items;

    while (std::getline(in, line))
    {
        ++line_no;
        any_line = true;
        items.clear();

        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end)
        {
            if (is_space(*p))
            {
                ++p;
                continue;
            }
            const char* token_end = p;
            while (token_end < end && !is_space(*token_end))
                ++token_end;
            Item value = 0;
            auto [ptr, ec] = std::from_chars(p, token_end, value);
            if (ec != std::errc{} || ptr != token_end)
                throw ParseError(line_no, "malformed item '" + std::string(p, token_end) + "'");
            items.push_back(value);
            p = token_end;
        }

        if (items.empty() && !options.keep_empty)
            continue;
        Pattern t(std::move(items));
        items = {};
        if (!t.empty())
            n = std::max<std::size_t>(n, std::size_t{t.back()} + 1);
        ++entries[std::move(t)];
    }

    if (!any_line)
        throw ParseError(0, "empty input");
    if (entries.empty())
        throw ParseError(0, "no transactions");
    return TransactionDataset(std::move(entries), n);
}

TransactionDataset parse_fimi(std::string_view text, ParseOptions options)
{
    std::istringstream in{std::string(text)};
    return parse_fimi(in, options);
}

TransactionDataset read_fimi_file(const std::filesystem::path& path, ParseOptions options)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    return parse_fimi(in, options);
}

void write_fimi(std::ostream& out, const TransactionDataset& d)
{
    for (const auto& [x, count] : d.entries())
    {
        std::string line;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (i)
                line += ' ';
            line += std::to_string(x.items()[i]);
        }
        line += '\n';
        for (std::uint64_t c = 0; c < count; ++c)
            out << line;
    }
}

std::uint64_t support_count(const TransactionDataset& d, const Pattern& x)
{
    std::uint64_t count = 0;
    for (const auto& [t, m] : d.entries())
        if (x.is_subset_of(t))
            count += m;
    return count;
}

double empirical_eta(const TransactionDataset& d, const Pattern& x)
{
    if (d.total() == 0)
        throw DataError("empirical expectation of an empty dataset");
    return static_cast<double>(support_count(d, x)) / static_cast<double>(d.total());
}

EmpiricalDistribution::EmpiricalDistribution(const TransactionDataset& d)
{
    if (d.total() == 0)
        throw DataError("empirical distribution of an empty dataset");
    const double n = static_cast<double>(d.total());
    probs_.reserve(d.unique_count());
    for (const auto& [x, count] : d.entries())
        probs_.emplace_back(x, static_cast<double>(count) / n);
}

double EmpiricalDistribution::probability(const Pattern& x) const
{
    auto it = std::lower_bound(probs_.begin(), probs_.end(), x,
                               [](const auto& e, const Pattern& key) { return e.first < key; });
    return (it != probs_.end() && it->first == x) ? it->second : 0.0;
}

} // namespace tbm
