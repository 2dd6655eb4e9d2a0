#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "seqimit/diagram.hpp"

namespace seqimit {

/// Syntax or validation failure in `.cg` text. line() is 1-based, 0 when the
/// problem is not tied to one line (e.g. a missing `target` statement).
class parse_error : public diagram_error {
public:
    parse_error(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Line-oriented format:
///   obs A B ...        observed declarations
///   lat U ...          latent declarations
///   edge A -> B        directed edge
///   edge A <-> B       confounded pair, expanded to a fresh latent _u_A_B_k
///   order A B C ...    total temporal order over declared nodes
///   actions X1 X2 ...  actions in temporal order
///   target Y
/// `#` starts a comment.
ImitationQuery parse_query(std::string_view text);
ImitationQuery parse_query_file(const std::filesystem::path& path);

/// Emits the same grammar; auto-generated confounders are written as
/// explicit latents, so parse_query(serialize_query(q)) == q.
std::string serialize_query(const ImitationQuery& q);

}  // namespace seqimit
