#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccnsim {

/// Hierarchical content name, rendered as slash-separated text
/// (`/video/movie/s17`). A final component of the form `s<decimal>` is
/// interpreted as the segment number of a chunked transfer.
class Name {
public:
  Name() = default;
  explicit Name(std::vector<std::string> components);

  /// Parses `/a/b/s3`. Throws std::invalid_argument on empty names or
  /// empty components.
  static Name parse(const std::string& uri);

  const std::vector<std::string>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }

  /// Component-wise prefix test. An empty name is a prefix of nothing.
  bool is_prefix_of(const Name& other) const;

  /// Segment number if the last component is `s<decimal>`.
  std::optional<std::uint64_t> segment() const;

  /// Copy of this name with `s<seg>` appended.
  Name with_segment(std::uint64_t seg) const;

  std::string to_string() const;

  bool operator==(const Name& other) const { return components_ == other.components_; }
  bool operator!=(const Name& other) const { return !(*this == other); }
  bool operator<(const Name& other) const { return components_ < other.components_; }

private:
  std::vector<std::string> components_;
};

}  // namespace ccnsim
