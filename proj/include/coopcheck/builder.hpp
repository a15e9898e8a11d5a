#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopcheck/model.hpp"

namespace coopcheck {

using Assignments = std::vector<std::pair<std::string, std::string>>;

// Assembles a MapProblem from names. Variables must be declared before the
// actions and states that mention them; build() validates the result.
// A variable whose name references exactly one declared agent becomes that
// agent's variable automatically.
class ProblemBuilder {
public:
    explicit ProblemBuilder(std::string name = "");

    ProblemBuilder &agent(const std::string &id);
    ProblemBuilder &variable(const std::string &name,
                             std::vector<std::string> domain,
                             std::optional<std::string> agent = std::nullopt);
    ProblemBuilder &action(const std::string &name, const std::string &owner,
                           const Assignments &pre, const Assignments &post,
                           const Assignments &prv,
                           const std::vector<std::string> &checked_pre = {});
    ProblemBuilder &init(const Assignments &values);
    ProblemBuilder &goal(const Assignments &values);

    MapProblem build(bool single_agent_ok = false) const;

private:
    PartialState make_state(const Assignments &values,
                            const std::string &context) const;

    MapProblem problem_;
    Assignments init_;
    Assignments goal_;
};

}  // namespace coopcheck
