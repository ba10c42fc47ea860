#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "psytab/table.hpp"

namespace psytab {

/// Splits a table into (train, tune). Per-stratum train sizes are
/// round-half-up(train_fraction * stratum size), clamped so both halves stay
/// non-empty when the stratum has at least 2 rows; a single-row stratum goes
/// to train. Membership is drawn with a seed-keyed shuffle per stratum, so the
/// result is bit-identical for a fixed seed. Rows keep their original
/// relative order inside each half.
std::pair<CategoricalTable, CategoricalTable> stratified_split(
    const CategoricalTable& table, double train_fraction,
    const std::optional<std::string>& stratify_column, std::uint64_t seed);

}  // namespace psytab
