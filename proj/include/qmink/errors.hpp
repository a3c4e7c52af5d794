#pragma once

#include <stdexcept>
#include <string>

namespace qmink {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QMINK_ERROR(Name)                                   \
    class Name : public Error {                             \
    public:                                                 \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

QMINK_ERROR(SingularMatrix);
QMINK_ERROR(OutsideDomain);
QMINK_ERROR(NotInSpan);
QMINK_ERROR(OnLightCone);
QMINK_ERROR(ConventionMismatch);
QMINK_ERROR(TruncationMismatch);
QMINK_ERROR(TruncationTooSmall);
QMINK_ERROR(IllConditioned);
QMINK_ERROR(BudgetExceeded);
QMINK_ERROR(InvalidParameter);

#undef QMINK_ERROR

}  // namespace qmink
