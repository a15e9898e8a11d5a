#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace coopcheck {

// Structured tokens have the form head(arg1,...,argN); arguments may nest.
// Anything without a balanced trailing argument list is treated as atomic.
struct TokenParts {
    std::string head;
    std::vector<std::string> args;
    bool structured = false;
};

TokenParts split_token(const std::string &token);
std::string join_token(const TokenParts &parts);

// Rewrites a token: `sub` is tried on the whole token first and then,
// recursively, on every argument. Heads are never rewritten.
using TokenSubstitution =
    std::function<std::optional<std::string>(const std::string &)>;
std::string substitute_token(const std::string &token,
                             const TokenSubstitution &sub);

// Replaces every occurrence of `from` (as whole token or nested argument)
// with `to`.
std::string replace_token(const std::string &token, const std::string &from,
                          const std::string &to);

// All entries of `candidates` that occur in `token` as the whole token or
// as a nested argument, in candidate order, without duplicates.
std::vector<std::string> tokens_in(const std::string &token,
                                   const std::vector<std::string> &candidates);

}  // namespace coopcheck
