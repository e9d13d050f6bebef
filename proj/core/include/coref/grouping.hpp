#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coref {

/// Index of a possible majority candidate: a value occurring at least as often as all
/// other values together, if one exists; otherwise whatever survives the vote.
template <class T>
std::optional<std::size_t> pmc_index(std::span<const T> values) {
  if (values.empty()) return std::nullopt;
  std::size_t candidate = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (count == 0) {
      candidate = i;
      count = 1;
    } else if (values[i] == values[candidate]) {
      ++count;
    } else {
      --count;
    }
  }
  return candidate;
}

template <class T>
std::optional<T> pmc(std::span<const T> values) {
  auto i = pmc_index(values);
  if (!i) return std::nullopt;
  return values[*i];
}

struct GroupingStats {
  std::size_t sorted = 0;  // elements that went through the comparison sort
};

/// Groups elements by value. Elements carrying the PMC value form the first group without
/// being sorted; the others are stably sorted by value and cut at value changes. Within a
/// group, elements keep their input order.
template <class E, class V>
std::vector<std::vector<E>> group_by_value(std::span<const std::pair<E, V>> pairs, GroupingStats* stats = nullptr) {
  std::vector<std::vector<E>> groups;
  if (pairs.empty()) return groups;

  std::size_t candidate = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (count == 0) {
      candidate = i;
      count = 1;
    } else if (pairs[i].second == pairs[candidate].second) {
      ++count;
    } else {
      --count;
    }
  }

  const V& majority = pairs[candidate].second;
  std::vector<E> first;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].second == majority) {
      first.push_back(pairs[i].first);
    } else {
      others.push_back(i);
    }
  }
  groups.push_back(std::move(first));
  if (stats) stats->sorted += others.size();

  std::stable_sort(others.begin(), others.end(),
                   [&](std::size_t a, std::size_t b) { return pairs[a].second < pairs[b].second; });
  for (std::size_t i = 0; i < others.size();) {
    std::vector<E> group;
    std::size_t j = i;
    while (j < others.size() && pairs[others[j]].second == pairs[others[i]].second) {
      group.push_back(pairs[others[j]].first);
      ++j;
    }
    groups.push_back(std::move(group));
    i = j;
  }
  return groups;
}

template <class E, class V>
std::vector<std::vector<E>> group_by_value(const std::vector<std::pair<E, V>>& pairs, GroupingStats* stats = nullptr) {
  return group_by_value(std::span<const std::pair<E, V>>(pairs), stats);
}

}  // namespace coref
