#pragma once

#include <stdexcept>
#include <string>

namespace oclust {

// Error type thrown by every module. Messages carry the offending
// event/object/attribute identifiers so callers can report precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oclust
