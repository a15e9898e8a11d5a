#pragma once

#include <stdexcept>
#include <string>

namespace coopcheck {

// Distinct codes for every rejection path so callers (and tests) can match
// on the condition instead of the message text.
enum class ErrorCode {
    SyntaxError,
    Structural,
    UnknownVariable,
    UnknownAgent,
    UnknownAction,
    DuplicateName,
    EmptyDomain,
    DuplicateValue,
    ValueOutOfDomain,
    GoalOnAgentVar,
    NeedsMultipleAgents,
    AgentVarMultiRef,
    AgentRefMismatch,
    ReservedToken,
    InitNotFull,
    PostEmpty,
    PrvPostOverlap,
    PrePrvOverlap,
    PreWithoutPost,
    CrossAgentCondition,
    JoinConflict,
    GadgetUnbuildable,
    SuperagentInitAmbiguous,
    NotHomogeneous,
    NotAcyclic,
    UnsolvableProblem,
    IoError,
};

const char *error_code_name(ErrorCode code);

class CoopError : public std::runtime_error {
public:
    CoopError(ErrorCode code, const std::string &message);
    ErrorCode code() const {
        return code_;
    }

private:
    ErrorCode code_;
};

}  // namespace coopcheck
