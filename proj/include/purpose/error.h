#ifndef PURPOSE_ERROR_H_
#define PURPOSE_ERROR_H_

#include <stdexcept>
#include <string>

namespace purpose {

// Raised for malformed or inconsistent input data (bad rows, duplicate ids,
// missing files). Precondition violations on API arguments use
// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace purpose

#endif  // PURPOSE_ERROR_H_
