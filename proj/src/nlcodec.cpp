#include "jssp/nlcodec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>

#include "jssp/instgen.hpp"

namespace jssp {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const auto start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

template <class T>
std::optional<T> to_number(std::string_view s) {
  T value{};
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string preamble(int jobs, int machines) {
  return "Optimize schedule for " + std::to_string(jobs) + " Jobs across " + std::to_string(machines) +
         " Machines to minimize makespan. Each job involves a series of Operations needing specific machines "
         "and times. Operations are processed in order, without interruption, on a single Machine at a time.";
}

// Cursor over free text for the solution-line grammar.
class Scanner {
 public:
  Scanner(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool require_space() {
    const auto before = pos_;
    skip_space();
    return pos_ > before;
  }
  bool literal(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }
  template <class T>
  std::optional<T> integer() {
    const auto start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    return to_number<T>(text_.substr(start, pos_ - start));
  }
  std::optional<double> decimal() {
    const auto start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ == start) return std::nullopt;
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_digit(text_[pos_ + 1])) {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    return to_number<double>(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t pos_;
};

bool word_start(std::string_view text, std::size_t pos) {
  return pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
}

// "Job j Operation k on Machine m : s + d -> e" at pos.
std::optional<std::pair<ScheduledOp, std::size_t>> match_op(std::string_view text, std::size_t pos) {
  Scanner sc(text, pos);
  ScheduledOp op;
  if (!sc.literal("Job") || !sc.require_space()) return std::nullopt;
  auto job = sc.integer<int>();
  if (!job || !sc.require_space() || !sc.literal("Operation") || !sc.require_space()) return std::nullopt;
  auto k = sc.integer<int>();
  if (!k || !sc.require_space() || !sc.literal("on") || !sc.require_space() || !sc.literal("Machine") ||
      !sc.require_space()) {
    return std::nullopt;
  }
  auto machine = sc.integer<int>();
  if (!machine) return std::nullopt;
  sc.skip_space();
  if (!sc.literal(":")) return std::nullopt;
  sc.skip_space();
  auto start = sc.integer<Time>();
  if (!start) return std::nullopt;
  sc.skip_space();
  if (!sc.literal("+")) return std::nullopt;
  sc.skip_space();
  auto duration = sc.integer<int>();
  if (!duration) return std::nullopt;
  sc.skip_space();
  if (!sc.literal("->")) return std::nullopt;
  sc.skip_space();
  auto end = sc.integer<Time>();
  if (!end) return std::nullopt;
  op = ScheduledOp{*job, *k, *machine, *start, *duration, *end};
  return std::make_pair(op, sc.pos());
}

std::optional<double> find_makespan(std::string_view text) {
  constexpr std::string_view kKey = "Makespan";
  for (auto pos = text.find(kKey); pos != std::string_view::npos; pos = text.find(kKey, pos + 1)) {
    Scanner sc(text, pos + kKey.size());
    sc.skip_space();
    if (!sc.literal(":")) continue;
    sc.skip_space();
    if (auto v = sc.decimal()) return v;
  }
  return std::nullopt;
}

void check_covers(const Schedule& schedule, const JsspInstance& instance) {
  if (schedule.ops().size() != static_cast<std::size_t>(instance.total_operations())) {
    throw Error(ErrorCode::CoverageError, "schedule has " + std::to_string(schedule.ops().size()) +
                                              " operations, instance has " +
                                              std::to_string(instance.total_operations()));
  }
  std::vector<std::vector<char>> seen(static_cast<std::size_t>(instance.num_jobs()));
  for (int j = 0; j < instance.num_jobs(); ++j) seen[static_cast<std::size_t>(j)].assign(instance.job(j).size(), 0);
  for (const auto& o : schedule.ops()) {
    if (o.job < 0 || o.job >= instance.num_jobs() || o.op < 0 ||
        o.op >= static_cast<int>(instance.job(o.job).size())) {
      throw Error(ErrorCode::CoverageError, "operation outside the instance");
    }
    const auto& ref = instance.op(o.job, o.op);
    auto& flag = seen[static_cast<std::size_t>(o.job)][static_cast<std::size_t>(o.op)];
    if (ref.machine != o.machine || ref.duration != o.duration || flag) {
      throw Error(ErrorCode::CoverageError, "schedule does not match the instance at job " +
                                                std::to_string(o.job) + " operation " + std::to_string(o.op));
    }
    flag = 1;
  }
}

}  // namespace

std::string_view to_string(NlStyle style) {
  return style == NlStyle::JobCentric ? "JobCentric" : "MachineCentric";
}

NlStyle parse_style(std::string_view text) {
  if (text == "job" || text == "JobCentric") return NlStyle::JobCentric;
  if (text == "machine" || text == "MachineCentric") return NlStyle::MachineCentric;
  throw Error(ErrorCode::InvalidSpec, "unknown style '" + std::string(text) + "'");
}

std::string format_makespan(double makespan) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", makespan);
  return buf;
}

std::string emit_matrix(const JsspInstance& instance, std::optional<double> makespan) {
  std::string out = std::to_string(instance.num_jobs()) + " " + std::to_string(instance.num_machines()) + "\n";
  for (const auto& job : instance.jobs()) {
    bool first = true;
    for (const auto& o : job) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(o.machine) + " " + std::to_string(o.duration);
    }
    out += '\n';
  }
  if (makespan) out += format_makespan(*makespan) + "\n";
  return out;
}

MatrixDocument parse_matrix(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  for (auto line : split_lines(text)) {
    auto words = split_words(line);
    if (!words.empty()) rows.push_back(std::move(words));
  }
  if (rows.empty() || rows[0].size() != 2) throw Error(ErrorCode::BadHeader, "expected 'jobs machines' header");
  const auto jobs = to_number<int>(rows[0][0]);
  const auto machines = to_number<int>(rows[0][1]);
  if (!jobs || !machines || *jobs < 1 || *machines < 1) {
    throw Error(ErrorCode::BadHeader, "header must hold two positive integers");
  }
  if (rows.size() < static_cast<std::size_t>(*jobs) + 1) {
    throw Error(ErrorCode::BadJobRow, "expected " + std::to_string(*jobs) + " job rows, found " +
                                          std::to_string(rows.size() - 1));
  }
  std::vector<std::vector<Operation>> ops(static_cast<std::size_t>(*jobs));
  for (int j = 0; j < *jobs; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j) + 1];
    if (row.size() % 2 != 0) {
      throw Error(ErrorCode::BadJobRow, "job row " + std::to_string(j) + " has an odd token count");
    }
    for (std::size_t t = 0; t < row.size(); t += 2) {
      const auto m = to_number<int>(row[t]);
      const auto d = to_number<int>(row[t + 1]);
      if (!m || !d) throw Error(ErrorCode::BadJobRow, "job row " + std::to_string(j) + " has a non-integer token");
      if (*m >= *machines) {
        throw Error(ErrorCode::InvalidMachine, "job " + std::to_string(j) + " uses machine " + std::to_string(*m));
      }
      ops[static_cast<std::size_t>(j)].push_back(Operation{*m, *d});
    }
  }
  MatrixDocument doc{JsspInstance(*jobs, *machines, std::move(ops)), std::nullopt};
  const auto rest = rows.size() - 1 - static_cast<std::size_t>(*jobs);
  if (rest > 1) throw Error(ErrorCode::BadJobRow, "unexpected rows after the job rows");
  if (rest == 1) {
    const auto& last = rows.back();
    std::optional<double> value;
    if (last.size() == 1) value = to_number<double>(last[0]);
    if (!value) throw Error(ErrorCode::BadJobRow, "trailing row is not a single makespan value");
    doc.makespan = value;
  }
  return doc;
}

std::string emit_problem_nl(const JsspInstance& instance, NlStyle style) {
  std::string out = preamble(instance.num_jobs(), instance.num_machines()) + "\n\nProblem: \n\n";
  std::vector<std::string> blocks;
  if (style == NlStyle::JobCentric) {
    for (int j = 0; j < instance.num_jobs(); ++j) {
      std::string b = " Job " + std::to_string(j) + " consists of the following Operations:\n";
      for (int k = 0; k < static_cast<int>(instance.job(j).size()); ++k) {
        const auto& o = instance.op(j, k);
        b += "  Operation " + std::to_string(k) + " on Machine " + std::to_string(o.machine) + " duration " +
             std::to_string(o.duration) + " mins.\n";
      }
      blocks.push_back(std::move(b));
    }
  } else {
    struct Item {
      int op, job, duration;
    };
    std::vector<std::vector<Item>> by_machine(static_cast<std::size_t>(instance.num_machines()));
    for (int j = 0; j < instance.num_jobs(); ++j) {
      for (int k = 0; k < static_cast<int>(instance.job(j).size()); ++k) {
        const auto& o = instance.op(j, k);
        by_machine[static_cast<std::size_t>(o.machine)].push_back({k, j, o.duration});
      }
    }
    for (int m = 0; m < instance.num_machines(); ++m) {
      auto& items = by_machine[static_cast<std::size_t>(m)];
      std::sort(items.begin(), items.end(),
                [](const Item& a, const Item& b) { return a.op != b.op ? a.op < b.op : a.job < b.job; });
      std::string b = " Machine " + std::to_string(m) + " is used for the following Operations:\n";
      for (const auto& it : items) {
        b += "  Job " + std::to_string(it.job) + " Operation " + std::to_string(it.op) + " duration " +
             std::to_string(it.duration) + " mins.\n";
      }
      blocks.push_back(std::move(b));
    }
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += "\n\n";
    out += blocks[i];
  }
  return out;
}

JsspInstance parse_problem_nl(std::string_view text) {
  int jobs = 0;
  int machines = 0;
  bool have_preamble = false;
  std::map<std::pair<int, int>, Operation> entries;
  int current_job = -1;
  int current_machine = -1;

  auto add = [&](int j, int k, int m, int d) {
    if (j < 0 || j >= jobs) throw Error(ErrorCode::InvalidJob, "job " + std::to_string(j) + " out of range");
    const Operation o{m, d};
    auto [it, inserted] = entries.emplace(std::make_pair(j, k), o);
    if (!inserted && !(it->second == o)) {
      throw Error(ErrorCode::DuplicateOp, "job " + std::to_string(j) + " operation " + std::to_string(k) +
                                              " is described twice with different data");
    }
  };
  auto strip = [](std::string_view w) {
    while (!w.empty() && (w.back() == '.' || w.back() == ':' || w.back() == ',')) w.remove_suffix(1);
    return w;
  };

  for (auto line : split_lines(text)) {
    const auto w = split_words(line);
    if (w.empty()) continue;
    if (!have_preamble) {
      for (std::size_t i = 0; i + 7 < w.size(); ++i) {
        if (w[i] == "Optimize" && w[i + 1] == "schedule" && w[i + 2] == "for" && w[i + 4] == "Jobs" &&
            w[i + 5] == "across" && strip(w[i + 7]) == "Machines") {
          const auto j = to_number<int>(w[i + 3]);
          const auto m = to_number<int>(w[i + 6]);
          if (j && m && *j > 0 && *m > 0) {
            jobs = *j;
            machines = *m;
            have_preamble = true;
            break;
          }
        }
      }
      continue;
    }
    // " Job j consists of the following Operations:"
    if (w.size() >= 7 && w[0] == "Job" && w[2] == "consists" && w[5] == "following") {
      if (const auto j = to_number<int>(w[1])) {
        current_job = *j;
        current_machine = -1;
        continue;
      }
    }
    // " Machine m is used for the following Operations:"
    if (w.size() >= 8 && w[0] == "Machine" && w[2] == "is" && w[3] == "used") {
      if (const auto m = to_number<int>(w[1])) {
        current_machine = *m;
        current_job = -1;
        continue;
      }
    }
    // "  Operation k on Machine m duration d mins."
    if (w.size() >= 7 && w[0] == "Operation" && w[2] == "on" && w[3] == "Machine" && w[5] == "duration" &&
        current_job >= 0) {
      const auto k = to_number<int>(w[1]);
      const auto m = to_number<int>(w[4]);
      const auto d = to_number<int>(strip(w[6]));
      if (k && m && d) add(current_job, *k, *m, *d);
      continue;
    }
    // "  Job j Operation k duration d mins."
    if (w.size() >= 6 && w[0] == "Job" && w[2] == "Operation" && w[4] == "duration" && current_machine >= 0) {
      const auto j = to_number<int>(w[1]);
      const auto k = to_number<int>(w[3]);
      const auto d = to_number<int>(strip(w[5]));
      if (j && k && d) add(*j, *k, current_machine, *d);
      continue;
    }
  }
  if (!have_preamble) throw Error(ErrorCode::BadPreamble, "missing 'Optimize schedule for N Jobs across M Machines'");

  std::vector<std::vector<Operation>> ops(static_cast<std::size_t>(jobs));
  for (const auto& [key, o] : entries) {
    auto& job = ops[static_cast<std::size_t>(key.first)];
    if (key.second != static_cast<int>(job.size())) {
      throw Error(ErrorCode::NonContiguousOps, "job " + std::to_string(key.first) + " is missing operation " +
                                                   std::to_string(job.size()));
    }
    job.push_back(o);
  }
  for (int j = 0; j < jobs; ++j) {
    if (ops[static_cast<std::size_t>(j)].empty()) {
      throw Error(ErrorCode::NonContiguousOps, "job " + std::to_string(j) + " has no operations");
    }
  }
  return JsspInstance(jobs, machines, std::move(ops));
}

std::string format_solution_line(const ScheduledOp& op) {
  return " Job " + std::to_string(op.job) + " Operation " + std::to_string(op.op) + " on Machine " +
         std::to_string(op.machine) + " : " + std::to_string(op.start) + " + " + std::to_string(op.duration) +
         " -> " + std::to_string(op.end) + " ";
}

std::string emit_solution_nl(const Schedule& schedule, const JsspInstance& instance) {
  check_covers(schedule, instance);
  auto ops = schedule.ops();
  std::sort(ops.begin(), ops.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.machine != b.machine) return a.machine < b.machine;
    return a.job < b.job;
  });
  std::string out = "Solution:\n\n";
  int last_op = 0;
  for (const auto& o : ops) {
    out += format_solution_line(o) + "\n";
    if (o.end == schedule.makespan()) last_op = o.op;
  }
  out += "\nMakespan:  " + format_makespan(static_cast<double>(schedule.makespan())) +
         ", as it is the maximum end completion time of Operation " + std::to_string(last_op) + "\n";
  return out;
}

ParsedSolution parse_solution_nl(std::string_view text) {
  ParsedSolution parsed;
  for (auto pos = text.find("Job"); pos != std::string_view::npos;) {
    if (word_start(text, pos)) {
      if (auto m = match_op(text, pos)) {
        if (!m->first.consistent()) parsed.arithmetic_defects.push_back(parsed.ops.size());
        parsed.ops.push_back(m->first);
        pos = text.find("Job", m->second);
        continue;
      }
    }
    pos = text.find("Job", pos + 1);
  }
  if (parsed.ops.empty()) throw Error(ErrorCode::NoOperationsFound, "no operation lines in the text");
  parsed.claimed_makespan = find_makespan(text);
  return parsed;
}

std::string build_user_prompt(const JsspInstance& instance, NlStyle style, int prompt_variant) {
  if (prompt_variant < 0 || prompt_variant >= static_cast<int>(kPromptVariants.size())) {
    throw Error(ErrorCode::InvalidSpec, "prompt variant out of range");
  }
  return std::string(kPromptVariants[static_cast<std::size_t>(prompt_variant)]) + "\n\n" +
         emit_problem_nl(instance, style);
}

ChatRecord build_chat_record(const JsspInstance& instance, const Schedule& schedule, NlStyle style,
                             std::optional<int> prompt_variant, std::mt19937_64& rng, std::string instance_id) {
  const int variant = prompt_variant ? *prompt_variant
                                     : uniform_int(rng, 0, static_cast<int>(kPromptVariants.size()) - 1);
  ChatRecord rec;
  rec.system = std::string(kSystemPrompt);
  rec.user = build_user_prompt(instance, style, variant);
  rec.assistant = emit_solution_nl(schedule, instance);
  rec.metadata = ChatMetadata{std::move(instance_id), instance.num_jobs(), instance.num_machines(), style, variant};
  return rec;
}

}  // namespace jssp
