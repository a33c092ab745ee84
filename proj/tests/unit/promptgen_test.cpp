#include <fstream>
#include <regex>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/promptgen.hpp"

using namespace tyfix;
namespace fs = std::filesystem;

namespace {

const char* kAuthSnippet =
    "if user:\n"
    "    user_pass = '%s:%s' % (unquote(user), unquote(password))\n"
    "    creds = base64.b64encode(user_pass).strip()\n"
    "else:\n"
    "    creds = None\n";

std::vector<FixInstance> corpus(const std::string& name) {
  return load_corpus(std::string(TYFIX_TEST_DATA) + "/" + name).instances;
}

Forest mined(const std::vector<FixInstance>& fixes) {
  std::vector<FixTemplate> ts;
  for (const auto& f : fixes) ts.push_back(parse_fix(f));
  return mine_all(ts, 1);
}

struct Target {
  std::string source;
  syntax::Node program;
  ViewSite site;
  BuggyProgramView view;
  Target(std::string src, const std::vector<int>& lines) : source(std::move(src)), program(syntax::parse_source(source)) {
    view = make_view(program, lines, 3, &site);
  }
};

// Masks appear as <extra_id_0>, <extra_id_1>, ... in order, each once.
bool dense_masks(const CodePrompt& p) {
  std::regex re("<extra_id_(\\d+)>");
  std::size_t expect = 0;
  for (auto it = std::sregex_iterator(p.text.begin(), p.text.end(), re); it != std::sregex_iterator(); ++it) {
    if (std::stoul((*it)[1]) != expect++) return false;
  }
  return expect == p.mask_count;
}

class FailingFiller : public MaskFiller {
 public:
  std::vector<FillResult> fill(const CodePrompt&, std::size_t) override { throw FillerError("unreachable"); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("specific templates reproduce their fixes") {
  for (const auto& inst : corpus("desk")) {
    ParsedFix p = parse_fix_detailed(inst);
    Target t(p.buggy_src, p.bug_lines);
    bool reproduced = false;
    for (const auto& app : apply_template(t.program, t.view, t.site, p.tpl)) {
      CodePrompt prompt = render_prompt(app, p.buggy_src);
      if (prompt.mask_count == 0 && syntax::normalize(prompt.text) == syntax::normalize(p.fixed_src)) reproduced = true;
    }
    CHECK_MESSAGE(reproduced, inst.id);
  }
}

TEST_CASE("untouched lines and comments survive a splice") {
  std::string src = "import os  # keep\n\ndef f(n):\n    # count\n    return 'n=' + n\n";
  auto tpl = parse_fix({"t", src, "import os  # keep\n\ndef f(n):\n    # count\n    return 'n=' + str(n)\n", {}, {}});
  Target t(src, {5});
  auto apps = apply_template(t.program, t.view, t.site, tpl);
  REQUIRE(apps.size() == 1);
  CHECK(render_prompt(apps[0], src).text ==
        "import os  # keep\n\ndef f(n):\n    # count\n    return 'n=' + str(n)\n");
}

TEST_CASE("the mined wrap template masks the function name") {
  Forest f = mined(corpus("wraps"));
  Target t(kAuthSnippet, {2});
  auto matched = bfs_select(f, t.view);
  REQUIRE(matched.size() == 1);
  auto apps = apply_template(t.program, t.view, t.site, matched[0]);
  REQUIRE(apps.size() == 1);
  CodePrompt p = render_prompt(apps[0], kAuthSnippet);
  CHECK(p.mask_count == 1);
  CHECK(p.text.find("user_pass = <extra_id_0>('%s:%s' % (unquote(user), unquote(password)))") != std::string::npos);
  CHECK(p.context.find("<extra_id_0>") != std::string::npos);
  TableFiller filler({{{"to_text"}, 0.4}, {{"to_bytes"}, 0.9}, {{"a", "b"}, 1.0}});
  auto gen = generate_patches(kAuthSnippet, t.view, t.site, rank(matched), filler);
  REQUIRE(gen.candidates.size() == 2);
  CHECK(gen.candidates[0].fills == std::vector<std::string>{"to_bytes"});
  CHECK(gen.candidates[0].text.find("to_bytes('%s:%s' % (unquote(user), unquote(password)))") != std::string::npos);
}

TEST_CASE("remove and add templates") {
  std::string buggy = "def f(x):\n    if x is None:\n        raise ValueError(x)\n    return x + 1\n";
  std::string fixed = "def f(x):\n    return x + 1\n";
  auto rm = parse_fix({"rm", buggy, fixed, {}, {}});
  REQUIRE(rm.category == Category::Remove);
  Target t(buggy, {2, 3});
  auto apps = apply_template(t.program, t.view, t.site, rm);
  REQUIRE(apps.size() == 1);
  CHECK(render_prompt(apps[0], buggy).text == fixed);

  auto add = parse_fix({"add", fixed, buggy, {}, {}});
  REQUIRE(add.category == Category::Add);
  Target u(fixed, {2});
  CHECK(syntax::normalize(render_prompt(apply_template(u.program, u.view, u.site, add)[0], fixed).text) ==
        syntax::normalize(buggy));
  // A template that does not match has no site.
  Target other("y = 2\n", {1});
  CHECK_THROWS_AS(apply_template(other.program, other.view, other.site, rm), NoMatchSite);
}

TEST_CASE("too many masks") {
  syntax::Node m = syntax::parse_source("f()\n");
  Application app;
  app.program = m;
  app.relation = "body";
  app.end = app.original_end = 1;
  auto& call = syntax::node_at(app.program, {0, 0});
  for (int i = 0; i < 101; ++i) {
    syntax::Node hole;
    hole.hole = syntax::HoleKind::Subtree;
    hole.hole_base = "Expr";
    call.children.push_back({"args", hole});
  }
  CHECK_THROWS_AS(render_prompt(app, "f()\n"), TooManyMasks);
  CHECK(render_prompt(app, "f()\n", 5, 101).mask_count == 101);
  app.program = m;
  CHECK(render_prompt(app, "f()\n").mask_count == 0);
}

TEST_CASE("every prompt from mined templates is well formed") {
  auto fixes = corpus("desk");
  Forest f = mined(fixes);
  EchoFiller echo;
  std::size_t prompts = 0;
  for (const auto& inst : fixes) {
    ParsedFix p = parse_fix_detailed(inst);
    Target t(p.buggy_src, p.bug_lines);
    for (const auto& tpl : matched_templates(f, t.view)) {
      for (const auto& app : apply_template(t.program, t.view, t.site, tpl)) {
        CodePrompt prompt = render_prompt(app, p.buggy_src);
        ++prompts;
        CHECK_MESSAGE(dense_masks(prompt), tpl.id);
        CHECK(render_prompt(app, p.buggy_src).text == prompt.text);
        auto filled = fill_prompt(prompt, echo.fill(prompt, 1).at(0).fills);
        CHECK_NOTHROW_MESSAGE(syntax::parse_source(filled), filled);
      }
    }
  }
  CHECK(prompts > fixes.size());
}

TEST_CASE("generation bounds, ordering and errors") {
  Forest f = mined(corpus("desk"));
  std::string src = "def g(v):\n    if v == None:\n        return 0\n    return v\n";
  Target t(src, {2});
  auto matched = matched_templates(f, t.view);
  REQUIRE(matched.size() >= 2);
  auto ranked = rank(matched);
  TableFiller two({{{"a"}, 0.5}, {{"b"}, 0.7}, {{"a", "b"}, 0.1}, {{"b", "a"}, 0.2}});
  auto gen = generate_patches(src, t.view, t.site, ranked, two, {2, 3, 5});
  CHECK(gen.candidates.size() <= 2 * 3 + 3);
  std::set<std::string> texts;
  for (const auto& c : gen.candidates) CHECK(texts.insert(c.text).second);

  FailingFiller failing;
  auto broken = generate_patches(src, t.view, t.site, ranked, failing);
  CHECK_FALSE(broken.errors.empty());
  for (const auto& c : broken.candidates) CHECK(c.fills.empty());

  // Zero-mask templates give exactly their applications.
  auto specific = parse_fix({"s", src, "def g(v):\n    if v is None:\n        return 0\n    return v\n", {}, {}});
  EchoFiller echo;
  auto direct = generate_patches(src, t.view, t.site, rank({specific}), echo);
  REQUIRE(direct.candidates.size() == 1);
  CHECK(direct.candidates[0].text ==
        render_prompt(apply_template(t.program, t.view, t.site, specific)[0], src).text);
}

TEST_CASE("validation filters syntax errors and never touches the project") {
  fs::path root = fs::temp_directory_path() / "tyfix_validate_test";
  fs::remove_all(root);
  fs::create_directories(root / "proj");
  std::ofstream(root / "proj" / "app.py") << kAuthSnippet;
  std::ofstream(root / "proj" / "test.sh") << "grep -q to_bytes app.py\n";
  std::string before = slurp(root / "proj" / "app.py");

  Forest f = mined(corpus("wraps"));
  Target t(kAuthSnippet, {2});
  TableFiller table({{{"to_bytes"}, 0.9}, {{"to_text"}, 0.5}});
  FaultInjectingFiller faulty(table);
  auto gen = generate_patches(kAuthSnippet, t.view, t.site, rank(bfs_select(f, t.view)), faulty);
  REQUIRE(gen.candidates.size() == 4);
  ValidationOptions opts{root / "proj", "app.py", "sh test.sh", root / "work", std::chrono::seconds(10)};
  auto checked = validate(gen.candidates, opts);
  std::size_t corrupted = 0;
  for (const auto& c : checked) {
    bool bad = !c.fills.empty() && c.fills[0].rfind(FaultInjectingFiller::kCorruption, 0) == 0;
    corrupted += bad;
    if (bad) CHECK(c.status == PatchStatus::Generated);
  }
  CHECK(corrupted == 2);
  CHECK(checked[0].status == PatchStatus::Plausible);
  CHECK(checked[0].id == gen.candidates[0].id);
  CHECK(std::count_if(checked.begin(), checked.end(), [](const auto& c) { return c.status == PatchStatus::Plausible; }) == 1);
  CHECK(slurp(root / "proj" / "app.py") == before);
  CHECK(fs::exists(root / "work" / checked[0].id / "app.py"));
  auto manifest = nlohmann::json::parse(manifest_json(checked));
  CHECK(manifest[0]["status"] == "plausible");

  opts.workdir = root / "proj" / "work";
  CHECK_THROWS_AS(validate(gen.candidates, opts), SandboxError);
  fs::remove_all(root);
}

TEST_CASE("test commands are killed at the timeout") {
  auto start = std::chrono::steady_clock::now();
  CHECK(run_with_timeout("sleep 20", fs::temp_directory_path(), std::chrono::seconds(1)) == -1);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
  CHECK(run_with_timeout("exit 3", fs::temp_directory_path(), std::chrono::seconds(5)) == 3);
}

TEST_CASE("http filler protocol") {
  httplib::Server server;
  nlohmann::json seen;
  server.Post("/fill", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    nlohmann::json out{{"results", {{{"fills", {"to_bytes"}}, {"score", 0.8}}, {{"fills", {"x", "y"}}, {"score", 0.1}}}}};
    res.set_content(out.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  CodePrompt p;
  p.mask_count = 1;
  p.context = "x = <extra_id_0>(y)\n";
  HttpFiller filler("http://127.0.0.1:" + std::to_string(port) + "/fill");
  auto r = filler.fill(p, 5);
  server.stop();
  th.join();
  REQUIRE(r.size() == 1);
  CHECK(r[0].fills == std::vector<std::string>{"to_bytes"});
  CHECK(seen["prompt"] == p.context);
  CHECK(seen["mask_count"] == 1);
  CHECK(seen["beam"] == 5);
  HttpFiller dead("http://127.0.0.1:" + std::to_string(port) + "/fill", std::chrono::seconds(1));
  CHECK_THROWS_AS(dead.fill(p, 5), FillerError);
}
