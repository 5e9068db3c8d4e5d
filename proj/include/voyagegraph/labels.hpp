#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voyagegraph {

/// Mention-level visit status. Declaration order is the tie-break order.
enum class MentionLabel : std::uint8_t {
  Visit,
  PlanToVisit,
  See,
  VisitPast,
  VisitFuture,
  UnkOrNotVisit,
};

/// Entity-level visit status.
enum class EntityLabel : std::uint8_t {
  Visit,
  Other,
};

template <class Label>
struct LabelTraits;

template <>
struct LabelTraits<MentionLabel> {
  static constexpr std::size_t count = 6;
  static constexpr std::array<MentionLabel, count> all = {
      MentionLabel::Visit,     MentionLabel::PlanToVisit, MentionLabel::See,
      MentionLabel::VisitPast, MentionLabel::VisitFuture, MentionLabel::UnkOrNotVisit};
  static constexpr std::array<std::string_view, count> names = {
      "Visit", "PlanToVisit", "See", "VisitPast", "VisitFuture", "UnkOrNotVisit"};
};

template <>
struct LabelTraits<EntityLabel> {
  static constexpr std::size_t count = 2;
  static constexpr std::array<EntityLabel, count> all = {EntityLabel::Visit,
                                                         EntityLabel::Other};
  static constexpr std::array<std::string_view, count> names = {"Visit", "Other"};
};

template <class Label>
concept VisitLabel = requires {
  LabelTraits<Label>::count;
  LabelTraits<Label>::all;
  LabelTraits<Label>::names;
};

template <VisitLabel Label>
constexpr std::size_t label_index(Label label) {
  return static_cast<std::size_t>(label);
}

template <VisitLabel Label>
constexpr std::string_view label_name(Label label) {
  return LabelTraits<Label>::names[label_index(label)];
}

template <VisitLabel Label>
std::optional<Label> try_parse_label(std::string_view name) {
  for (std::size_t i = 0; i < LabelTraits<Label>::count; ++i) {
    if (LabelTraits<Label>::names[i] == name) return LabelTraits<Label>::all[i];
  }
  return std::nullopt;
}

template <VisitLabel Label>
Label parse_label(std::string_view name) {
  if (auto label = try_parse_label<Label>(name)) return *label;
  throw std::invalid_argument("unknown label '" + std::string(name) + "'");
}

/// Per-label weights or counts indexed by label order.
template <VisitLabel Label, class T>
using LabelArray = std::array<T, LabelTraits<Label>::count>;

}  // namespace voyagegraph
