#include "psytab/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "psytab/errors.hpp"
#include "psytab/rng.hpp"

namespace psytab {

namespace {

// floor(x + 0.5) with a small nudge so values that are exact halves in real
// arithmetic (e.g. 0.7 * 5) still round up despite binary representation drift.
std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

}  // namespace

std::pair<CategoricalTable, CategoricalTable> stratified_split(
    const CategoricalTable& table, double train_fraction,
    const std::optional<std::string>& stratify_column, std::uint64_t seed) {
    if (table.empty()) throw Error(errc::empty_table, "stratified_split: table is empty");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(errc::invalid_argument, "train_fraction must lie in (0, 1)");

    const std::size_t n = table.row_count();

    // Group row indices by stratum code (a single stratum when no column given).
    std::map<std::uint16_t, std::vector<std::size_t>> strata;
    if (stratify_column) {
        const std::size_t col = table.schema().column_index(*stratify_column);
        for (std::size_t i = 0; i < n; ++i) strata[table.code(i, col)].push_back(i);
    } else {
        auto& all = strata[0];
        all.resize(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
    }

    std::vector<bool> in_train(n, false);
    for (auto& [stratum_code, rows] : strata) {
        const std::size_t s = rows.size();
        std::size_t train_size = round_half_up(train_fraction * static_cast<double>(s));
        if (s >= 2)
            train_size = std::clamp<std::size_t>(train_size, 1, s - 1);
        else
            train_size = 1;  // single-row stratum goes to train

        auto rng = make_rng(seed, stratum_code, 0x5741u);
        shuffle(rows, rng);
        for (std::size_t k = 0; k < train_size; ++k) in_train[rows[k]] = true;
    }

    std::vector<std::size_t> train_idx, tune_idx;
    for (std::size_t i = 0; i < n; ++i) (in_train[i] ? train_idx : tune_idx).push_back(i);
    return {table.select_rows(train_idx), table.select_rows(tune_idx)};
}

}  // namespace psytab
