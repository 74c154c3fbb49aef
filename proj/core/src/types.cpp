#include "sgmh/types.hpp"

#include <sstream>

namespace sgmh {

ValidationError::ValidationError(std::vector<std::string> issues)
  : std::runtime_error([&] {
        std::ostringstream os;
        os << "scenario validation failed (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << ")";
        for (const auto& i : issues)
            os << "\n  " << i;
        return os.str();
    }())
  , issues_(std::move(issues))
{
}

} // namespace sgmh
