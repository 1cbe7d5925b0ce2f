#ifndef MPST_TEST_CORPUS_HPP
#define MPST_TEST_CORPUS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpst/surface.hpp"

#ifndef MPST_CORPUS_DIR
#error "MPST_CORPUS_DIR must be defined"
#endif

namespace mpst::testing {

inline std::string corpus_path(const std::string& name) { return std::string(MPST_CORPUS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TypeEnv corpus_env(const std::string& name) { return parse_env(read_text(corpus_path(name))); }
inline SourceFile corpus_file(const std::string& name) { return parse_file(read_text(corpus_path(name))); }

/// Corpus files with the given extension that load without error, sorted.
inline std::vector<std::string> corpus_names(const std::string& ext) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(MPST_CORPUS_DIR)) {
    if (e.path().extension() != ext) continue;
    std::string name = e.path().filename().string();
    try {
      if (ext == ".env") {
        corpus_env(name);
      } else {
        corpus_file(name);
      }
      out.push_back(name);
    } catch (const std::exception&) {
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Types and environments from the authorisation example.
inline SessionType type_of(const std::string& text) { return parse_type(text); }

inline const char* kTs = "rec X . (c!login(unit) . a?auth(bool) . X + c!cancel(unit) . end)";
inline const char* kTc =
    "rec X . (s?login(unit) . (a!pwd(str) . X + a!ssh(unit) . X) + s?cancel(unit) . a!quit(unit) . end)";
inline const char* kTa =
    "rec X . (c?pwd(str) . s!auth(bool) . X + c?ssh(unit) . s!auth(bool) . X + c?quit(unit) . end)";
inline const char* kTa1 =
    "rec X . (c?pwd(str) . s!auth(bool) . X + c?ssh(unit) . s!auth(bool) . end + c?quit(unit) . end)";

inline TypeEnv delta() {
  return TypeEnv{{"s", type_of(kTs)}, {"c", type_of(kTc)}, {"a", unfold(type_of(kTa))}};
}
inline TypeEnv delta2() {
  SessionType ta = type_of(kTa), ta1 = type_of(kTa1);
  SessionType t2 = SessionType::sum(
      SessionType::in("c", "pwd", Sort::Str, SessionType::out("s", "auth", Sort::Bool, ta)),
      SessionType::sum(SessionType::in("c", "ssh", Sort::Unit, SessionType::out("s", "auth", Sort::Bool, ta1)),
                       SessionType::in("c", "quit", Sort::Unit, SessionType::end())));
  return TypeEnv{{"s", type_of(kTs)}, {"c", type_of(kTc)}, {"a", t2}};
}
inline TypeEnv delta_lock() {
  SessionType ts = type_of(kTs), tc = type_of(kTc);
  return TypeEnv{{"s", SessionType::in("a", "auth", Sort::Bool, ts)},
                 {"c", SessionType::sum(SessionType::out("a", "pwd", Sort::Str, tc),
                                        SessionType::out("a", "ssh", Sort::Unit, tc))},
                 {"a", SessionType::end()}};
}
inline TypeEnv delta_end() {
  return TypeEnv{{"s", SessionType::end()}, {"c", SessionType::end()}, {"a", SessionType::end()}};
}

}  // namespace mpst::testing

#endif  // MPST_TEST_CORPUS_HPP
