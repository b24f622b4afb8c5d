#include "hweyl/errors.hpp"

namespace hweyl {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace hweyl
