// Copyright 2026 The cojudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cojudge/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/text.h"

namespace cojudge {
namespace {

namespace fs = std::filesystem;

// Seeded helpers on top of mt19937_64 that do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double Unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool Chance(double p) { return Unit() < p; }
  // Uniform in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    std::uint64_t const limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }
  int Between(int lo, int hi) { return lo + static_cast<int>(Below(static_cast<std::uint64_t>(hi - lo + 1))); }
  template <typename T>
  T const& Pick(std::vector<T> const& v) { return v[Below(v.size())]; }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

struct Language {
  std::string label;
  std::string fence;
};

std::vector<Language> const& Languages() {
  static auto const* langs = new std::vector<Language>{
      {"GNU C++17", "cpp"}, {"GNU C++17", "cpp"}, {"GNU C++17", "cpp"},
      {"C", "c"},           {"Python 3", "python"}, {"Java 11", "java"}};
  return *langs;
}

std::vector<std::string> const kVars = {"n", "m", "k", "ans", "sum", "cnt", "best", "cur",
                                        "total", "res", "x", "y", "lo", "hi", "mid"};
std::vector<std::string> const kOps = {"+", "-", "*", "%"};
std::vector<std::string> const kCmp = {"<", "<=", ">", ">=", "!="};

// A program is a list of body statements wrapped in a per-language shell.
struct Program {
  std::vector<std::string> body;
};

std::string Statement(Rng& rng, std::string const& fence) {
  auto const& a = rng.Pick(kVars);
  auto const& b = rng.Pick(kVars);
  auto const c = rng.Between(1, 1000);
  bool const py = fence == "python";
  switch (rng.Below(5)) {
    case 0:
      return py ? absl::StrCat(a, " = ", b, " ", rng.Pick(kOps), " ", c)
                : absl::StrCat(a, " = ", b, " ", rng.Pick(kOps), " ", c, ";");
    case 1:
      return py ? absl::StrCat("if ", a, " ", rng.Pick(kCmp), " ", b, ": ", a, " = ", b)
                : absl::StrCat("if (", a, " ", rng.Pick(kCmp), " ", b, ") ", a, " = ", b, ";");
    case 2:
      return py ? absl::StrCat("for i in range(", c, "): ", a, " += i")
                : absl::StrCat("for (int i = 0; i < ", c, "; i++) ", a, " += i;");
    case 3:
      return py ? absl::StrCat(a, " = max(", a, ", ", b, ")")
                : absl::StrCat(a, " = ", a, " > ", b, " ? ", a, " : ", b, ";");
    default:
      return py ? absl::StrCat("while ", a, " > ", c, ": ", a, " //= 2")
                : absl::StrCat("while (", a, " > ", c, ") ", a, " /= 2;");
  }
}

Program NewProgram(Rng& rng, std::string const& fence) {
  Program p;
  int const n = rng.Between(4, 9);
  for (int i = 0; i < n; ++i) p.body.push_back(Statement(rng, fence));
  return p;
}

Program Revise(Program p, Rng& rng, std::string const& fence, double edits) {
  // Poisson-like count from repeated Bernoulli draws.
  int count = 0;
  for (int i = 0; i < 4 * static_cast<int>(std::ceil(edits)); ++i) count += rng.Chance(0.25);
  count = std::max(count, 1);
  for (int e = 0; e < count; ++e) {
    auto const op = rng.Below(3);
    if (op == 0 || p.body.size() < 2) {
      p.body.insert(p.body.begin() + static_cast<std::ptrdiff_t>(rng.Below(p.body.size() + 1)),
                    Statement(rng, fence));
    } else if (op == 1) {
      p.body.erase(p.body.begin() + static_cast<std::ptrdiff_t>(rng.Below(p.body.size())));
    } else {
      p.body[rng.Below(p.body.size())] = Statement(rng, fence);
    }
  }
  return p;
}

std::string Render(Program const& p, std::string const& fence) {
  std::string out;
  if (fence == "python") {
    out = "import sys\n\ndef main():\n";
    out += "    n, m, k = map(int, sys.stdin.readline().split())\n";
    out += "    ans = sum = cnt = best = cur = total = res = x = y = lo = hi = mid = 0\n";
    for (auto const& s : p.body) out += "    " + s + "\n";
    out += "    print(ans)\n\nmain()\n";
  } else if (fence == "java") {
    out = "import java.util.*;\n\npublic class Main {\n  public static void main(String[] args) {\n";
    out += "    Scanner in = new Scanner(System.in);\n";
    out += "    long n = in.nextLong(), m = in.nextLong(), k = in.nextLong();\n";
    out += "    long ans = 0, sum = 0, cnt = 0, best = 0, cur = 0, total = 0, res = 0, x = 0, y = 0, lo = 0, hi = 0, mid = 0;\n";
    for (auto const& s : p.body) out += "    " + s + "\n";
    out += "    System.out.println(ans);\n  }\n}\n";
  } else {
    out = fence == "c" ? "#include <stdio.h>\n\n" : "#include <bits/stdc++.h>\nusing namespace std;\n\n";
    out += "int main() {\n  long long n, m, k;\n";
    out += fence == "c" ? "  scanf(\"%lld %lld %lld\", &n, &m, &k);\n" : "  cin >> n >> m >> k;\n";
    out += "  long long ans = 0, sum = 0, cnt = 0, best = 0, cur = 0, total = 0, res = 0, x = 0, y = 0, lo = 0, hi = 0, mid = 0;\n";
    for (auto const& s : p.body) out += "  " + s + "\n";
    out += fence == "c" ? "  printf(\"%lld\\n\", ans);\n" : "  cout << ans << endl;\n";
    out += "  return 0;\n}\n";
  }
  return out;
}

std::string HtmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string IsoTime(std::int64_t epoch_seconds) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SubmissionFields {
  std::string participant, problem, verdict, timestamp, language, fence, code;
  int turn = 0;
};

std::string RenderHtml(SubmissionFields const& f, Rng& rng) {
  std::string meta;
  if (rng.Chance(0.5)) {
    meta = absl::StrCat("<table class=\"meta\">\n",
                        "<tr><td>Participant</td><td>", f.participant, "</td></tr>\n",
                        "<tr><td>Problem</td><td>", f.problem, "</td></tr>\n",
                        "<tr><td>Verdict</td><td><span class=\"v\">", f.verdict, "</span></td></tr>\n",
                        "<tr><td>Language</td><td>", HtmlEscape(f.language), "</td></tr>\n",
                        "<tr><td>Submitted</td><td>", f.timestamp, "</td></tr>\n</table>\n");
  } else {
    meta = absl::StrCat("<div class=\"meta\">\n<p><b>Participant:</b> ", f.participant, "</p>\n",
                        "<p><b>Problem:</b> ", f.problem, "</p>\n",
                        "<p><b>Verdict:</b> ", f.verdict, "</p>\n",
                        "<p><b>Language:</b> ", HtmlEscape(f.language), "</p>\n",
                        "<p><b>Submitted:</b> ", f.timestamp, "</p>\n</div>\n");
  }
  return absl::StrCat(
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Submission ",
      f.problem, "</title>\n<style>\nbody { font-family: sans-serif; }\n.meta td { padding: 2px 8px; }\n",
      "pre { background: #f4f4f4; }\n</style>\n<script>\nwindow.dataLayer = window.dataLayer || [];\n",
      "function track(id) { console.log('Verdict: tracked ' + id); }\n</script>\n</head>\n<body>\n",
      "<nav><a href=\"/contest\">Contest</a> | <a href=\"/standings\">Standings</a></nav>\n",
      "<h1>Submission details</h1>\n", meta, "<h2>Source</h2>\n<pre><code class=\"language-", f.fence,
      "\">\n", HtmlEscape(f.code), "</code></pre>\n",
      "<script>track(", f.turn, ");</script>\n<footer>Online judge export</footer>\n</body>\n</html>\n");
}

std::string RenderMarkdown(SubmissionFields const& f) {
  return absl::StrCat("# Submission ", f.problem, "\n\n",
                      "| Field | Value |\n|---|---|\n",
                      "| Participant | ", f.participant, " |\n",
                      "| Problem | ", f.problem, " |\n",
                      "| Verdict | ", f.verdict, " |\n",
                      "| Language | ", f.language, " |\n",
                      "| Submitted | ", f.timestamp, " |\n\n",
                      "```", f.fence, "\n", f.code, "```\n");
}

std::string RenderText(SubmissionFields const& f) {
  return absl::StrCat("Participant: ", f.participant, "\nProblem: ", f.problem,
                      "\nVerdict: ", f.verdict, "\nLanguage: ", f.language,
                      "\nSubmitted: ", f.timestamp, "\n\n~~~\n", f.code, "~~~\n");
}

std::vector<std::string> const kPromptOpeners = {
    "Can you explain why my solution", "Help me fix the loop in my code for",
    "What is a faster approach to", "My program gets wrong answer on",
    "Please review the edge cases of", "How do I avoid overflow in",
    "Suggest a greedy idea for", "Why does this recursion time out on"};
std::vector<std::string> const kPromptWords = {
    "array", "prefix", "sum", "binary", "search", "modulo", "graph", "dp", "state",
    "transition", "sorting", "two", "pointers", "constraint", "input", "output",
    "overflow", "complexity", "loop", "index", "boundary", "case", "test", "greedy"};

std::string PromptRecord(Rng& rng, std::string const& problem) {
  std::string s = absl::StrCat(rng.Pick(kPromptOpeners), " problem ", problem, "?");
  int const words = rng.Between(12, 40);
  for (int i = 0; i < words; ++i) {
    s += ' ';
    s += rng.Pick(kPromptWords);
  }
  return s + ".";
}

}  // namespace

absl::StatusOr<SynthSummary> GenerateSyntheticCorpus(fs::path const& dir,
                                                     SynthOptions const& o) {
  if (o.participants < 1 || o.problems < 1) {
    return absl::InvalidArgumentError("participants and problems must be >= 1");
  }
  if (o.attempts < o.participants) {
    return absl::InvalidArgumentError("attempts must be >= participants");
  }
  Rng rng(o.seed);
  int const cells = o.participants * o.problems;
  int groups = static_cast<int>(std::lround(o.density * cells));
  groups = std::clamp(groups, o.participants, std::min(cells, o.attempts));
  int const cap = std::max(o.max_trajectory_length, 1);
  if (static_cast<long long>(groups) * cap < o.attempts) {
    return absl::InvalidArgumentError("attempts exceed the trajectory length cap");
  }

  // Every participant gets at least one problem; the rest of the grid is
  // filled in shuffled order.
  std::vector<std::pair<int, int>> chosen;
  std::vector<std::vector<bool>> used(o.participants, std::vector<bool>(o.problems, false));
  for (int u = 0; u < o.participants; ++u) {
    int const p = static_cast<int>(rng.Below(o.problems));
    used[u][p] = true;
    chosen.emplace_back(u, p);
  }
  std::vector<std::pair<int, int>> rest;
  for (int u = 0; u < o.participants; ++u) {
    for (int p = 0; p < o.problems; ++p) {
      if (!used[u][p]) rest.emplace_back(u, p);
    }
  }
  rng.Shuffle(rest);
  for (int i = 0; static_cast<int>(chosen.size()) < groups; ++i) chosen.push_back(rest[i]);
  std::sort(chosen.begin(), chosen.end());

  // Polya urn over trajectory lengths, capped.
  std::vector<int> length(chosen.size(), 1);
  int total = static_cast<int>(chosen.size());
  for (int extra = total; extra < o.attempts; ++extra) {
    std::uint64_t weight = 0;
    for (int l : length) weight += l < cap ? l : 0;
    auto r = rng.Below(weight);
    for (auto& l : length) {
      if (l >= cap) continue;
      if (r < static_cast<std::uint64_t>(l)) {
        ++l;
        break;
      }
      r -= l;
    }
    ++total;
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return absl::InternalError(absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));

  auto name = [](char prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%02d", prefix, i + 1);
    return std::string(buf);
  };
  std::vector<Language> participant_lang;
  for (int u = 0; u < o.participants; ++u) participant_lang.push_back(rng.Pick(Languages()));

  SynthSummary summary;
  summary.participants = o.participants;
  summary.trajectories = static_cast<int>(chosen.size());
  std::int64_t const base_time = 1740819600;  // 2025-03-01T09:00:00Z
  std::vector<std::vector<std::string>> problems_of(o.participants);
  for (std::size_t g = 0; g < chosen.size(); ++g) {
    auto const [u, p] = chosen[g];
    auto const participant = name('u', u);
    auto const problem = name('P', p);
    problems_of[u].push_back(problem);
    auto const& lang = participant_lang[u];
    int const k_len = length[g];
    std::optional<int> t_star;
    if (rng.Chance(o.solve_rate)) {
      t_star = k_len == 1 || rng.Chance(o.first_turn_solve) ? 1 : rng.Between(2, k_len);
      ++summary.solved_trajectories;
    }
    std::int64_t t = base_time + static_cast<std::int64_t>(u) * 86400 +
                     static_cast<std::int64_t>(p) * 3600;
    Program prog = NewProgram(rng, lang.fence);
    for (int k = 1; k <= k_len; ++k) {
      if (k > 1) prog = Revise(prog, rng, lang.fence, o.revision_edits);
      t += 60 + static_cast<std::int64_t>(rng.Below(900));
      std::string verdict;
      if (t_star && k == *t_star) {
        verdict = "AC";
      } else if (t_star && k > *t_star) {
        verdict = rng.Chance(0.5) ? "AC" : "WA";
      } else {
        static std::vector<std::string> const kFails = {"WA", "WA", "TLE", "RE", "CE"};
        verdict = rng.Pick(kFails);
      }
      SubmissionFields f{participant, problem, verdict, IsoTime(t), lang.label, lang.fence,
                         Render(prog, lang.fence), k};
      auto const roll = rng.Unit();
      std::string ext, body;
      if (roll < 0.5) {
        ext = "html";
        body = RenderHtml(f, rng);
      } else if (roll < 0.8) {
        ext = "md";
        body = RenderMarkdown(f);
      } else {
        ext = "txt";
        body = RenderText(f);
      }
      auto const path = dir / participant / "submissions" /
                        absl::StrCat(problem, "_", k < 10 ? "0" : "", k, ".", ext);
      if (auto s = WriteFileAtomic(path, body); !s.ok()) return s;
      ++summary.attempts;
    }
  }

  int logs = o.prompt_logs > 0
                 ? o.prompt_logs
                 : static_cast<int>(std::lround(o.attempts * 83.0 / 517.0));
  logs = std::max(logs, o.participants);
  std::vector<int> per(o.participants, 1);
  for (int i = o.participants; i < logs; ++i) ++per[rng.Below(o.participants)];
  for (int u = 0; u < o.participants; ++u) {
    auto const participant = name('u', u);
    for (int i = 0; i < per[u]; ++i) {
      int const records = rng.Between(1, 3);
      std::vector<std::string> recs;
      for (int r = 0; r < records; ++r) recs.push_back(PromptRecord(rng, rng.Pick(problems_of[u])));
      auto const roll = rng.Unit();
      std::string ext, body;
      if (roll < 0.3) {
        ext = "html";
        body = absl::StrCat("<html><head><style>p{margin:0}</style><script>var s=1;</script></head><body>\n");
        for (auto const& r : recs) body += absl::StrCat("<p>", HtmlEscape(r), "</p>\n");
        body += "</body></html>\n";
      } else {
        ext = roll < 0.6 ? "md" : "txt";
        body = Join(recs, "\n\n") + "\n";
      }
      char file[32];
      std::snprintf(file, sizeof(file), "log_%03d.%s", i + 1, ext.c_str());
      if (auto s = WriteFileAtomic(dir / participant / "prompts" / file, body); !s.ok()) return s;
      ++summary.prompt_logs;
    }
  }
  return summary;
}

}  // namespace cojudge
