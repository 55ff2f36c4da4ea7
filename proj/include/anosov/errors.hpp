#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Base for everything the library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ANOSOV_ERROR(Name)                      \
    struct Name : Error {                       \
        explicit Name(const std::string& m)     \
            : Error(std::string(#Name ": ") + m) {} \
    };

ANOSOV_ERROR(FieldError)
ANOSOV_ERROR(ShapeError)
ANOSOV_ERROR(DomainError)
ANOSOV_ERROR(ConfigError)
ANOSOV_ERROR(DegenerateInput)
ANOSOV_ERROR(GapTooSmall)
ANOSOV_ERROR(NearSingularConfig)
ANOSOV_ERROR(NotProximal)
ANOSOV_ERROR(NotContracting)
ANOSOV_ERROR(SearchBudgetExceeded)
ANOSOV_ERROR(ProximalizationFailed)
ANOSOV_ERROR(ShrinkEpsilon)
ANOSOV_ERROR(NoValidEpsilon)
ANOSOV_ERROR(NoValidParameters)

#undef ANOSOV_ERROR

}  // namespace anosov
