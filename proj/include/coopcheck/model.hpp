#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopcheck/errors.hpp"

namespace coopcheck {

// The undefined value u. It is never a member of any declared domain.
constexpr int kUndefined = -1;

// Global symbol standing for the executing/owning agent in signatures.
// Reserved: no declared agent, variable or value may use it.
inline constexpr const char *kExAg = "EX-AG";

enum class Verdict { Yes, No, Indeterminate };

const char *verdict_name(Verdict v);
Verdict verdict_from_name(const std::string &name);

struct Variable {
    std::string name;
    std::vector<std::string> domain;  // D(v), file order, duplicate-free
    std::optional<std::string> agent_ref;  // present iff agent variable

    // Index of `value` in the domain, or kUndefined if absent.
    int value_index(const std::string &value) const;
};

// Total mapping from variable index to a domain-value index or u.
class PartialState {
public:
    PartialState() = default;
    explicit PartialState(std::size_t num_vars)
        : values_(num_vars, kUndefined) {}

    std::size_t size() const {
        return values_.size();
    }
    int operator[](std::size_t var) const {
        return values_[var];
    }
    void set(std::size_t var, int value) {
        values_[var] = value;
    }
    bool defined(std::size_t var) const {
        return values_[var] != kUndefined;
    }
    bool fully_defined() const;
    std::size_t defined_count() const;

    bool operator==(const PartialState &other) const = default;

private:
    std::vector<int> values_;
};

struct Action {
    std::string name;   // structured token op(arg1,...,argN)
    std::string owner;  // agent id
    PartialState pre;
    PartialState post;
    PartialState prv;
    // Variables whose pre value is checked but not updated; exempt from the
    // strict pre/post pairing rule.
    std::vector<int> checked_only_pre;
};

struct Agent {
    std::string id;
    std::vector<int> actions;     // indices into MapProblem::actions
    std::vector<int> agent_vars;  // V_phi: indices of owned variables
};

struct PlanStep {
    int action = -1;
    int agent = -1;
    bool operator==(const PlanStep &other) const = default;
};

struct Plan {
    std::vector<PlanStep> steps;
    bool operator==(const Plan &other) const = default;
};

struct MapProblem {
    std::string name;  // optional label, carried through serialization
    std::vector<Variable> variables;
    std::vector<Action> actions;  // file order across all agents
    std::vector<Agent> agents;
    PartialState init;  // fully defined
    PartialState goal;
    // Derived single-agent problems (super agent) waive the |Phi| > 1 rule.
    bool single_agent_ok = false;

    int variable_index(const std::string &name) const;  // -1 if absent
    int agent_index(const std::string &id) const;       // -1 if absent
    bool is_agent_var(int var) const {
        return variables[var].agent_ref.has_value();
    }
    // All declared agent ids, file order.
    std::vector<std::string> agent_ids() const;
};

// ---- state algebra -------------------------------------------------------

// s1 updated by s2: result[v] = s2[v] if defined, else s1[v].
PartialState update(const PartialState &s1, const PartialState &s2);

// Pointwise join, defined only where at most one side is defined; a
// conflict raises JoinConflict naming the variable index.
PartialState join(const PartialState &s1, const PartialState &s2);

// s1 is subsumed by s2: every defined value of s1 agrees with s2.
bool subsumes(const PartialState &s1, const PartialState &s2);

// ---- execution -----------------------------------------------------------

struct ExecutionResult {
    PartialState final_state;
    std::vector<std::size_t> skipped;  // indices of inapplicable steps
};

// Recursive plan execution: inapplicable steps leave the state unchanged
// and are recorded in `skipped`. `s` must be fully defined.
ExecutionResult execute(const MapProblem &problem, const PartialState &s,
                        const Plan &plan);

struct ValidationResult {
    bool valid = false;
    std::optional<std::size_t> failing_step;  // absent when only the goal fails
    std::string violation;
    PartialState final_state;
};

// Valid iff no step is skipped from I and goal is subsumed by the final state.
ValidationResult validate_plan(const MapProblem &problem, const Plan &plan);

// ---- structural validation -----------------------------------------------

struct ValidationOptions {
    bool require_multiple_agents = true;
};

// Checks every model invariant; throws CoopError with a distinct code on
// the first violation.
void validate_problem(const MapProblem &problem,
                      const ValidationOptions &options = {});

// Renders a partial state as name:value pairs (defined entries only).
std::string format_state(const MapProblem &problem, const PartialState &s);
std::string format_plan(const MapProblem &problem, const Plan &plan);

}  // namespace coopcheck
