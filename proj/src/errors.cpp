#include "coopcheck/errors.hpp"

namespace coopcheck {

const char *error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::Structural: return "STRUCTURAL";
    case ErrorCode::UnknownVariable: return "UNKNOWN_VARIABLE";
    case ErrorCode::UnknownAgent: return "UNKNOWN_AGENT";
    case ErrorCode::UnknownAction: return "UNKNOWN_ACTION";
    case ErrorCode::DuplicateName: return "DUPLICATE_NAME";
    case ErrorCode::EmptyDomain: return "EMPTY_DOMAIN";
    case ErrorCode::DuplicateValue: return "DUPLICATE_VALUE";
    case ErrorCode::ValueOutOfDomain: return "VALUE_OUT_OF_DOMAIN";
    case ErrorCode::GoalOnAgentVar: return "GOAL_ON_AGENT_VAR";
    case ErrorCode::NeedsMultipleAgents: return "NEEDS_MULTIPLE_AGENTS";
    case ErrorCode::AgentVarMultiRef: return "AGENT_VAR_MULTI_REF";
    case ErrorCode::AgentRefMismatch: return "AGENT_REF_MISMATCH";
    case ErrorCode::ReservedToken: return "RESERVED_TOKEN";
    case ErrorCode::InitNotFull: return "INIT_NOT_FULL";
    case ErrorCode::PostEmpty: return "POST_EMPTY";
    case ErrorCode::PrvPostOverlap: return "PRV_POST_OVERLAP";
    case ErrorCode::PrePrvOverlap: return "PRE_PRV_OVERLAP";
    case ErrorCode::PreWithoutPost: return "PRE_WITHOUT_POST";
    case ErrorCode::CrossAgentCondition: return "CROSS_AGENT_CONDITION";
    case ErrorCode::JoinConflict: return "JOIN_CONFLICT";
    case ErrorCode::GadgetUnbuildable: return "GADGET_UNBUILDABLE";
    case ErrorCode::SuperagentInitAmbiguous: return "SUPERAGENT_INIT_AMBIGUOUS";
    case ErrorCode::NotHomogeneous: return "NOT_HOMOGENEOUS";
    case ErrorCode::NotAcyclic: return "NOT_ACYCLIC";
    case ErrorCode::UnsolvableProblem: return "UNSOLVABLE_PROBLEM";
    case ErrorCode::IoError: return "IO_ERROR";
    }
    return "UNKNOWN";
}

CoopError::CoopError(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace coopcheck
