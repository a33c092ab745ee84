// tyfix: mine fix templates from a corpus, repair a buggy file, measure coverage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "toml.hpp"
#include "tyfix/fix_parser.hpp"
#include "tyfix/matcher.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/promptgen.hpp"
#include "tyfix/serialize.hpp"

namespace fs = std::filesystem;
using namespace tyfix;

namespace {

constexpr int kUsage = 2;
constexpr int kNoMatch = 3;
constexpr int kEnvironment = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Settings resolved as: flag, then TYFIX_<KEY>, then the TOML file, then the default.
class Settings {
 public:
  void load_file(const std::string& path) {
    if (path.empty()) return;
    try {
      table_ = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
      throw UsageError("config " + path + ": " + std::string(e.description()));
    }
  }

  template <typename T>
  T get(const std::string& key, const CLI::Option* flag, const T& flag_value, const T& fallback) const {
    if (flag && flag->count() > 0) return flag_value;
    std::string env_key = "TYFIX_" + upper(key);
    if (const char* env = std::getenv(env_key.c_str())) return parse<T>(env, env_key);
    if (auto node = table_[key]) {
      if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = node.value<std::string>()) return *v;
      } else {
        if (auto v = node.value<long long>()) return static_cast<T>(*v);
      }
      throw UsageError("config key " + key + " has the wrong type");
    }
    return fallback;
  }

 private:
  static std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }
  template <typename T>
  static T parse(const std::string& text, const std::string& name) {
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else {
      try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size() || v < 0) throw std::invalid_argument(text);
        return static_cast<T>(v);
      } catch (const std::exception&) {
        throw UsageError(name + " is not a non-negative integer: " + text);
      }
    }
  }
  toml::table table_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw EnvironmentError("cannot write " + p.string());
  out << text;
}

Forest load_forest(const std::string& path) {
  try {
    return forest_from_string(read_file(path));
  } catch (const SchemaError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<Category> parse_categories(const std::string& list) {
  std::vector<Category> out;
  std::stringstream s(list);
  std::string item;
  while (std::getline(s, item, ',')) {
    auto c = parse_category(item);
    if (!c) throw UsageError("unknown category: " + item);
    out.push_back(*c);
  }
  return out;
}

// "12" or "12:14".
std::vector<int> parse_lines(const std::string& range, std::size_t line_count) {
  int a = 0, b = 0;
  char colon = 0;
  std::istringstream s(range);
  if (!(s >> a)) throw UsageError("bad --lines: " + range);
  b = a;
  if (s >> colon && (colon != ':' || !(s >> b))) throw UsageError("bad --lines: " + range);
  if (a < 1 || b < a || static_cast<std::size_t>(b) > line_count) {
    throw UsageError("--lines " + range + " is outside the file (" + std::to_string(line_count) + " lines)");
  }
  std::vector<int> out;
  for (int l = a; l <= b; ++l) out.push_back(l);
  return out;
}

struct Parsed {
  std::vector<FixTemplate> templates;
  std::vector<CorpusError> errors;
  std::size_t instances = 0;
};

Parsed parse_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
  Corpus corpus = load_corpus(dir);
  Parsed out;
  out.errors = corpus.errors;
  out.instances = corpus.instances.size();
  for (const auto& inst : corpus.instances) {
    try {
      out.templates.push_back(parse_fix(inst));
    } catch (const std::exception& e) {
      out.errors.push_back({inst.id, e.what()});
    }
  }
  for (const auto& e : out.errors) std::cerr << "skipped " << e.id << ": " << e.message << "\n";
  return out;
}

int run_mine(const std::string& corpus, const std::string& out, std::size_t min_freq, const std::string& categories,
             unsigned jobs) {
  Parsed parsed = parse_corpus(corpus);
  if (!categories.empty()) {
    auto keep = parse_categories(categories);
    std::erase_if(parsed.templates, [&](const FixTemplate& t) {
      return std::find(keep.begin(), keep.end(), t.category) == keep.end();
    });
  }
  if (parsed.templates.empty()) std::cerr << "warning: no fixes to mine in " << corpus << "\n";
  MiningReport report;
  Forest forest = mine_all(parsed.templates, min_freq, MinerOptions{jobs}, &report);
  write_file(out, forest_to_string(forest));
  auto j = nlohmann::json::parse(report.to_json());
  j["errors"] = nlohmann::json::array();
  for (const auto& e : parsed.errors) j["errors"].push_back({{"id", e.id}, {"message", e.message}});
  fs::path report_path = fs::path(out).replace_extension(".report.json");
  write_file(report_path, j.dump(2) + "\n");
  std::cerr << "mined " << parsed.templates.size() << " fixes into " << forest.size() << " trees in "
            << report.wall_seconds << " s\n";
  std::cout << report_path.string() << "\n";
  return 0;
}

int run_coverage(const std::string& forest_path, const std::string& corpus, const std::string& holdout,
                 std::size_t min_freq, bool brute, const std::string& out, unsigned jobs) {
  if (!fs::is_directory(corpus)) throw UsageError("corpus directory not found: " + corpus);
  Corpus c = load_corpus(corpus);
  for (const auto& e : c.errors) std::cerr << "skipped " << e.id << ": " << e.message << "\n";
  CoverageReport report;
  if (holdout == "leave-one-out") {
    report = leave_one_out_coverage(c.instances, min_freq, brute, jobs);
  } else {
    if (forest_path.empty()) throw UsageError("--forest is required without a holdout");
    Forest forest = load_forest(forest_path);
    report = brute ? brute_force_coverage(forest, c.instances) : template_coverage(forest, c.instances);
  }
  std::string text = report.to_json() + "\n";
  if (!out.empty()) write_file(out, text);
  std::cout << text;
  return 0;
}

struct RepairArgs {
  std::string forest, file, lines, filler, fill_table, test_cmd, out, project, workdir;
  std::size_t beam = 50, max_templates = 20, context = 5, window = 3;
  std::chrono::seconds timeout{300};
};

int run_repair(const RepairArgs& a) {
  Forest forest = load_forest(a.forest);
  std::string source = read_file(a.file);
  auto lines = parse_lines(a.lines, split_lines(source).size());
  syntax::Node program;
  try {
    program = syntax::parse_source(source);
  } catch (const syntax::SyntaxError& e) {
    throw UsageError(a.file + ": " + e.what());
  }
  ViewSite site;
  BuggyProgramView view = make_view(program, lines, a.window, &site);
  auto matched = bfs_select(forest, view);
  if (matched.empty()) {
    std::cerr << "no template matched " << a.file << " at lines " << a.lines << "\n";
    return kNoMatch;
  }
  RankedTemplates ranked = rank(matched);

  std::unique_ptr<MaskFiller> filler;
  if (a.filler == "echo") {
    filler = std::make_unique<EchoFiller>();
  } else if (a.filler == "mock") {
    if (a.fill_table.empty()) throw UsageError("--filler mock needs --fill-table");
    filler = std::make_unique<TableFiller>(TableFiller::from_json(read_file(a.fill_table)));
  } else if (a.filler.rfind("http://", 0) == 0 || a.filler.rfind("https://", 0) == 0) {
    filler = std::make_unique<HttpFiller>(a.filler);
  } else {
    throw UsageError("--filler must be mock, echo or an http URL");
  }
  Generation gen = generate_patches(source, view, site, ranked, *filler, {a.beam, a.max_templates, a.context});

  fs::path out(a.out);
  fs::path project = a.project.empty() ? fs::path(a.file).parent_path() : fs::path(a.project);
  if (project.empty()) project = ".";
  ValidationOptions vo;
  vo.project_dir = project;
  vo.file = fs::relative(fs::absolute(a.file), fs::absolute(project));
  vo.test_command = a.test_cmd;
  vo.workdir = a.workdir.empty() ? out / "sandbox" : fs::path(a.workdir);
  vo.timeout = a.timeout;
  std::vector<CandidatePatch> checked;
  try {
    checked = validate(gen.candidates, vo);
  } catch (const SandboxError& e) {
    throw EnvironmentError(e.what());
  }

  nlohmann::json ranked_json = nlohmann::json::array();
  for (const auto& g : ranked.groups) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& t : g.templates) ids.push_back({{"id", t.id}, {"instance_count", t.instance_count}});
    ranked_json.push_back({{"key", std::to_string(g.key)}, {"templates", ids}});
  }
  write_file(out / "ranked.json", ranked_json.dump(2) + "\n");
  nlohmann::json prompts = nlohmann::json::array();
  for (const auto& p : gen.prompts) {
    prompts.push_back({{"template_id", p.template_id}, {"mask_count", p.mask_count}, {"context", p.context}});
  }
  write_file(out / "prompts.json", prompts.dump(2) + "\n");
  std::string name = vo.file.generic_string();
  for (const auto& c : checked) {
    write_file(out / "patches" / (c.id + ".diff"), unified_diff(source, c.text, "a/" + name, "b/" + name));
  }
  write_file(out / "manifest.json", manifest_json(checked) + "\n");
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : gen.errors) errors.push_back({{"template_id", e.template_id}, {"message", e.message}});
  write_file(out / "errors.json", errors.dump(2) + "\n");

  std::size_t plausible = 0;
  for (const auto& c : checked) plausible += c.status == PatchStatus::Plausible;
  std::cout << matched.size() << " templates matched, " << checked.size() << " candidates, " << plausible
            << " plausible\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine fix templates for type errors and use them to repair Python code"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "TOML config file (also TYFIX_CONFIG)");

  unsigned jobs_flag = 0;
  std::size_t min_freq_flag = 5;

  auto* mine = app.add_subcommand("mine", "Mine a clustering forest from a fix corpus");
  std::string corpus, out, categories;
  mine->add_option("--corpus", corpus, "Corpus directory")->required();
  mine->add_option("--out", out, "Forest JSON to write")->required();
  auto* mine_freq = mine->add_option("--min-freq", min_freq_flag, "Minimum root frequency (default 5)");
  mine->add_option("--categories", categories, "Comma-separated subset of Add,Remove,Insert,Replace");
  auto* mine_jobs = mine->add_option("--jobs", jobs_flag, "Threads for distances (default: cores)");

  auto* repair = app.add_subcommand("repair", "Generate and validate patches for a buggy file");
  RepairArgs ra;
  std::size_t beam_flag = 50, max_templates_flag = 20, timeout_flag = 300;
  std::string filler_flag;
  repair->add_option("--forest", ra.forest, "Forest JSON")->required();
  repair->add_option("--file", ra.file, "Buggy Python file")->required();
  repair->add_option("--lines", ra.lines, "Bug lines, N or A:B")->required();
  auto* filler_opt = repair->add_option("--filler", filler_flag, "mock, echo or an http URL (default echo)");
  repair->add_option("--fill-table", ra.fill_table, "Results JSON for the mock filler");
  auto* beam_opt = repair->add_option("--beam", beam_flag, "Fills per prompt (default 50)");
  auto* max_opt = repair->add_option("--max-templates", max_templates_flag, "Templates to try (default 20)");
  repair->add_option("--test-cmd", ra.test_cmd, "Test command, run in each sandbox");
  auto* timeout_opt = repair->add_option("--timeout", timeout_flag, "Seconds per test run (default 300)");
  repair->add_option("--project", ra.project, "Project directory (default: the file's directory)");
  repair->add_option("--workdir", ra.workdir, "Sandbox root (default: OUT/sandbox)");
  repair->add_option("--out", ra.out, "Output directory")->required();

  auto* coverage = app.add_subcommand("coverage", "Template coverage of a fix corpus");
  std::string forest, holdout = "none", cov_out;
  bool brute = false;
  coverage->add_option("--forest", forest, "Forest JSON (not used with a holdout)");
  coverage->add_option("--corpus", corpus, "Corpus directory")->required();
  coverage->add_option("--holdout", holdout, "none or leave-one-out")
      ->check(CLI::IsMember({"none", "leave-one-out"}));
  auto* cov_freq = coverage->add_option("--min-freq", min_freq_flag, "Minimum frequency when re-mining (default 5)");
  coverage->add_flag("--brute-force", brute, "Check every template instead of descending the trees");
  coverage->add_option("--out", cov_out, "Report JSON to write");
  auto* cov_jobs = coverage->add_option("--jobs", jobs_flag, "Threads for distances (default: cores)");

  auto* normalize = app.add_subcommand("normalize", "Print a Python file in normalized form");
  std::string norm_file;
  normalize->add_option("file", norm_file, "Python file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    Settings s;
    if (config.empty()) {
      if (const char* c = std::getenv("TYFIX_CONFIG")) config = c;
    }
    s.load_file(config);
    unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    if (*mine) {
      return run_mine(corpus, out, s.get<std::size_t>("min_freq", mine_freq, min_freq_flag, 5), categories,
                      s.get<unsigned>("jobs", mine_jobs, jobs_flag, cores));
    }
    if (*coverage) {
      return run_coverage(forest, corpus, holdout, s.get<std::size_t>("min_freq", cov_freq, min_freq_flag, 5), brute,
                          cov_out, s.get<unsigned>("jobs", cov_jobs, jobs_flag, cores));
    }
    if (*repair) {
      ra.filler = s.get<std::string>("filler", filler_opt, filler_flag, "echo");
      ra.beam = s.get<std::size_t>("beam", beam_opt, beam_flag, 50);
      ra.max_templates = s.get<std::size_t>("max_templates", max_opt, max_templates_flag, 20);
      ra.timeout = std::chrono::seconds(s.get<std::size_t>("timeout", timeout_opt, timeout_flag, 300));
      return run_repair(ra);
    }
    if (*normalize) {
      std::cout << syntax::normalize(read_file(norm_file));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const syntax::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
