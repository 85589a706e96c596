#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cbrn {

// One attribute group (Color, Style, Volume, ...). Neuron i of the group's
// Cue Ball stores labels[i].
struct AttributeGroup {
  std::string name;
  std::vector<std::string> labels;

  friend bool operator==(const AttributeGroup&, const AttributeGroup&) = default;
};

class AttributeCatalog {
 public:
  AttributeCatalog() = default;
  explicit AttributeCatalog(std::vector<AttributeGroup> groups);

  const std::vector<AttributeGroup>& groups() const noexcept { return groups_; }
  bool empty() const noexcept { return groups_.empty(); }
  std::size_t pattern_count() const noexcept;

  // Case-insensitive group lookup.
  std::optional<std::size_t> find(std::string_view name) const;
  const AttributeGroup& group(std::string_view name) const;

  friend bool operator==(const AttributeCatalog&, const AttributeCatalog&) = default;

 private:
  std::vector<AttributeGroup> groups_;
};

bool iequals(std::string_view a, std::string_view b);

// Lines of the form `group:index:label`; blank lines and `#` comments are
// ignored. Groups keep the order of their first appearance.
AttributeCatalog parse_catalog(std::string_view text);
AttributeCatalog load_catalog(const std::filesystem::path& path);

}  // namespace cbrn
