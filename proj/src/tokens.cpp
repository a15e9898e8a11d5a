#include "coopcheck/tokens.hpp"

#include <algorithm>

namespace coopcheck {

TokenParts split_token(const std::string &token) {
    TokenParts parts;
    auto open = token.find('(');
    if (open == std::string::npos || token.back() != ')') {
        parts.head = token;
        return parts;
    }
    // Verify the parenthesis at `open` closes at the final character.
    int depth = 0;
    for (std::size_t i = open; i < token.size(); ++i) {
        if (token[i] == '(')
            ++depth;
        else if (token[i] == ')')
            --depth;
        if (depth == 0 && i + 1 != token.size()) {
            parts.head = token;  // trailing junk after the arg list: atomic
            return parts;
        }
    }
    if (depth != 0) {
        parts.head = token;
        return parts;
    }
    parts.structured = true;
    parts.head = token.substr(0, open);
    std::string body = token.substr(open + 1, token.size() - open - 2);
    std::string current;
    depth = 0;
    for (char c : body) {
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            parts.args.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty() || !parts.args.empty())
        parts.args.push_back(current);
    return parts;
}

std::string join_token(const TokenParts &parts) {
    if (!parts.structured)
        return parts.head;
    std::string out = parts.head + "(";
    for (std::size_t i = 0; i < parts.args.size(); ++i) {
        if (i > 0)
            out += ",";
        out += parts.args[i];
    }
    out += ")";
    return out;
}

std::string substitute_token(const std::string &token,
                             const TokenSubstitution &sub) {
    if (auto replacement = sub(token))
        return *replacement;
    TokenParts parts = split_token(token);
    if (!parts.structured)
        return token;
    for (auto &arg : parts.args)
        arg = substitute_token(arg, sub);
    return join_token(parts);
}

std::string replace_token(const std::string &token, const std::string &from,
                          const std::string &to) {
    return substitute_token(token, [&](const std::string &t) {
        return t == from ? std::optional<std::string>(to) : std::nullopt;
    });
}

namespace {
void collect_tokens(const std::string &token,
                    const std::vector<std::string> &candidates,
                    std::vector<std::string> &found) {
    if (std::find(candidates.begin(), candidates.end(), token) !=
        candidates.end()) {
        if (std::find(found.begin(), found.end(), token) == found.end())
            found.push_back(token);
        return;
    }
    TokenParts parts = split_token(token);
    if (!parts.structured)
        return;
    for (const auto &arg : parts.args)
        collect_tokens(arg, candidates, found);
}
}  // namespace

std::vector<std::string> tokens_in(const std::string &token,
                                   const std::vector<std::string> &candidates) {
    std::vector<std::string> raw;
    collect_tokens(token, candidates, raw);
    // Deterministic candidate order.
    std::vector<std::string> found;
    for (const auto &candidate : candidates)
        if (std::find(raw.begin(), raw.end(), candidate) != raw.end())
            found.push_back(candidate);
    return found;
}

}  // namespace coopcheck
