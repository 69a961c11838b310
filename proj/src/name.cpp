#include "ccnsim/name.hpp"

#include <cctype>
#include <stdexcept>

namespace ccnsim {

Name::Name(std::vector<std::string> components)
  : components_(std::move(components))
{
  if (components_.empty()) {
    throw std::invalid_argument("Name requires at least one component");
  }
  for (const auto& c : components_) {
    if (c.empty()) {
      throw std::invalid_argument("Name components must be non-empty");
    }
  }
}

Name Name::parse(const std::string& uri)
{
  std::vector<std::string> parts;
  std::string cur;
  std::size_t start = 0;
  if (uri.empty() || uri[0] != '/') {
    throw std::invalid_argument("name must start with '/': " + uri);
  }
  for (std::size_t i = 1; i <= uri.size(); ++i) {
    if (i == uri.size() || uri[i] == '/') {
      if (cur.empty()) {
        throw std::invalid_argument("empty name component in: " + uri);
      }
      parts.push_back(cur);
      cur.clear();
    }
    else {
      cur.push_back(uri[i]);
    }
  }
  return Name(std::move(parts));
}

bool Name::is_prefix_of(const Name& other) const
{
  if (components_.empty() || components_.size() > other.components_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i] != other.components_[i]) {
      return false;
    }
  }
  return true;
}

std::optional<std::uint64_t> Name::segment() const
{
  if (components_.empty()) {
    return std::nullopt;
  }
  const std::string& last = components_.back();
  if (last.size() < 2 || last[0] != 's') {
    return std::nullopt;
  }
  std::uint64_t value = 0;
  for (std::size_t i = 1; i < last.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(last[i]))) {
      return std::nullopt;
    }
    value = value * 10 + static_cast<std::uint64_t>(last[i] - '0');
  }
  return value;
}

Name Name::with_segment(std::uint64_t seg) const
{
  std::vector<std::string> parts = components_;
  parts.push_back("s" + std::to_string(seg));
  return Name(std::move(parts));
}

std::string Name::to_string() const
{
  std::string out;
  for (const auto& c : components_) {
    out += '/';
    out += c;
  }
  return out.empty() ? "/" : out;
}

}  // namespace ccnsim
