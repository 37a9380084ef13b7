#include "esslab/errors.hpp"

namespace esslab {

FileFormatError::FileFormatError(std::string where, const std::string& what)
    : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

}  // namespace esslab
