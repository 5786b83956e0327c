#pragma once

#include <stdexcept>
#include <string>

namespace skillsym {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SKILLSYM_DEFINE_ERROR(Name)                      \
    class Name : public Error {                          \
    public:                                              \
        explicit Name(const std::string& what)           \
            : Error(std::string(#Name ": ") + what) {}   \
    }

// core
SKILLSYM_DEFINE_ERROR(InapplicableAction);
SKILLSYM_DEFINE_ERROR(NotInInitiationSet);
SKILLSYM_DEFINE_ERROR(StepBoundExceeded);
SKILLSYM_DEFINE_ERROR(UndefinedPolicy);
SKILLSYM_DEFINE_ERROR(InvalidModel);

// symbols
SKILLSYM_DEFINE_ERROR(LevelMismatch);
SKILLSYM_DEFINE_ERROR(LevelOutOfRange);

// abstraction / hierarchy
SKILLSYM_DEFINE_ERROR(NoSubgoalStructure);
SKILLSYM_DEFINE_ERROR(NoFactoredStructure);
SKILLSYM_DEFINE_ERROR(PartitionExplosion);
SKILLSYM_DEFINE_ERROR(MissingStatistics);
SKILLSYM_DEFINE_ERROR(EmptyOptionSet);
SKILLSYM_DEFINE_ERROR(NotFactored);

// planner
SKILLSYM_DEFINE_ERROR(RefinementFault);
SKILLSYM_DEFINE_ERROR(InconsistentRecord);

// io
SKILLSYM_DEFINE_ERROR(ParseError);

#undef SKILLSYM_DEFINE_ERROR

} // namespace skillsym
