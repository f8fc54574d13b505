#pragma once

#include <stdexcept>
#include <string>

namespace mkdv {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MKDV_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& msg) : Error(msg) {}    \
    }

// Parameter validation.
MKDV_DEFINE_ERROR(NonPositiveN);
MKDV_DEFINE_ERROR(NonPositiveSpeed);
MKDV_DEFINE_ERROR(NegativeEps);
MKDV_DEFINE_ERROR(EnergyOutOfRange);
MKDV_DEFINE_ERROR(DomainViolation);

// Root finding.
MKDV_DEFINE_ERROR(NoSignChange);
MKDV_DEFINE_ERROR(MaxIterations);

// Quadrature.
MKDV_DEFINE_ERROR(NonConvergent);
MKDV_DEFINE_ERROR(NegativeRadicand);

// ODE integration.
MKDV_DEFINE_ERROR(StepUnderflow);
MKDV_DEFINE_ERROR(BlowUp);

// Model-specific degeneracies.
MKDV_DEFINE_ERROR(SingularFastField);
MKDV_DEFINE_ERROR(CenterSingularity);
MKDV_DEFINE_ERROR(SpeedUndefined);

// Dynamics solvers.
MKDV_DEFINE_ERROR(NoReturn);
MKDV_DEFINE_ERROR(NoConvergence);
MKDV_DEFINE_ERROR(NoCycle);
MKDV_DEFINE_ERROR(PeriodNotFound);

#undef MKDV_DEFINE_ERROR

} // namespace mkdv
