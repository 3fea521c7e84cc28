#ifndef PURPOSE_CLI_H_
#define PURPOSE_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace purpose::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Default for --seed on every subcommand that consumes randomness.
inline constexpr unsigned long long kDefaultSeed = 7;

// Entry point behind the `purpose` executable. Structured output goes to
// `out` (or files), diagnostics and usage errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Gold label file written by `gold`: header "tweet_id<TAB>label..." then one
// row per tweet; extra columns are ignored. Throws DataError on malformed
// rows or a repeated id.
std::vector<std::pair<std::string, std::string>> parse_gold_tsv(std::string_view content,
                                                                std::string_view source);

// Display order for a set of label names: a known annotation scheme's order
// when every name belongs to it, otherwise sorted.
std::vector<std::string> order_labels(std::vector<std::string> labels);

}  // namespace purpose::cli

#endif  // PURPOSE_CLI_H_
