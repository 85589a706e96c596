#include "cbrn/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cbrn/error.hpp"

namespace cbrn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

AttributeCatalog::AttributeCatalog(std::vector<AttributeGroup> groups) : groups_(std::move(groups)) {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& name = groups_[g].name;
    if (name.empty() || std::any_of(name.begin(), name.end(), [](char c) {
          return c == ':' || std::isspace(static_cast<unsigned char>(c));
        })) {
      throw Error(ErrorCode::kBadFormat, "group name '" + name + "' must be a single word without ':'");
    }
    for (const auto& label : groups_[g].labels) {
      if (label.empty() || label.find('\n') != std::string::npos) {
        throw Error(ErrorCode::kBadFormat, "labels must be non-empty single lines");
      }
    }
    for (std::size_t h = 0; h < g; ++h) {
      if (iequals(groups_[g].name, groups_[h].name)) {
        throw Error(ErrorCode::kDuplicateEntry, "duplicate group '" + groups_[g].name + "'");
      }
    }
    std::set<std::string> seen;
    for (const auto& label : groups_[g].labels) {
      if (!seen.insert(label).second) {
        throw Error(ErrorCode::kDuplicateEntry,
                    "duplicate label '" + label + "' in group '" + groups_[g].name + "'");
      }
    }
  }
}

std::size_t AttributeCatalog::pattern_count() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.labels.size();
  return n;
}

std::optional<std::size_t> AttributeCatalog::find(std::string_view name) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (iequals(groups_[g].name, name)) return g;
  }
  return std::nullopt;
}

const AttributeGroup& AttributeCatalog::group(std::string_view name) const {
  auto g = find(name);
  if (!g) throw Error(ErrorCode::kUnknownBall, "unknown attribute group '" + std::string(name) + "'");
  return groups_[*g];
}

AttributeCatalog parse_catalog(std::string_view text) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::string>> entries;

  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    auto c1 = line.find(':');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw Error(ErrorCode::kBadFormat, "catalog line " + std::to_string(line_no) + ": expected group:index:label");
    }
    auto group = trim(line.substr(0, c1));
    auto index_text = trim(line.substr(c1 + 1, c2 - c1 - 1));
    auto label = trim(line.substr(c2 + 1));
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
    if (group.empty() || label.empty() || ec != std::errc{} || ptr != index_text.data() + index_text.size()) {
      throw Error(ErrorCode::kBadFormat, "catalog line " + std::to_string(line_no) + ": malformed entry");
    }

    auto known = std::find_if(order.begin(), order.end(), [&](const std::string& g) { return iequals(g, group); });
    if (known == order.end()) {
      order.emplace_back(group);
      known = order.end() - 1;
    }
    auto& slots = entries[*known];
    if (!slots.emplace(index, std::string(label)).second) {
      throw Error(ErrorCode::kDuplicateEntry, "catalog line " + std::to_string(line_no) + ": duplicate entry " +
                                                  *known + ":" + std::to_string(index));
    }
  }

  std::vector<AttributeGroup> groups;
  for (const auto& name : order) {
    AttributeGroup g{name, {}};
    std::size_t expect = 0;
    for (const auto& [index, label] : entries[name]) {
      if (index != expect) {
        throw Error(ErrorCode::kIndexGap, "catalog group '" + name + "' is missing index " + std::to_string(expect));
      }
      g.labels.push_back(label);
      ++expect;
    }
    groups.push_back(std::move(g));
  }
  return AttributeCatalog(std::move(groups));
}

AttributeCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open catalog " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str());
}

}  // namespace cbrn
