#pragma once

#include <stdexcept>
#include <string>

namespace flagstar {

/// An internal identity that must hold failed; carries the anchor of the violated statement.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(std::string anchor, const std::string& what)
      : std::runtime_error(anchor + ": " + what), anchor_(std::move(anchor)) {}
  const std::string& anchor() const { return anchor_; }

 private:
  std::string anchor_;
};

}  // namespace flagstar
