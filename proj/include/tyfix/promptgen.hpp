#pragma once

// Applying templates to a buggy program, masked prompts, candidate patches
// and their validation.

#include <chrono>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tyfix/matcher.hpp"
#include "tyfix/syntax.hpp"
#include "tyfix/template.hpp"

namespace tyfix {

class NoMatchSite : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class GrammarViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooManyMasks : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A program with one template applied at one site. The rewritten statements
/// are `owner.relation[begin, end)` of `program`; they took the place of
/// `original_begin..original_end` of the same list in the buggy program.
struct Application {
  std::string template_id;
  syntax::Node program;
  syntax::NodePath owner;
  std::string relation;
  std::size_t begin = 0, end = 0;
  std::size_t original_begin = 0, original_end = 0;
};

/// One application per match site of Concat(IC_Tree, B_Tree) in the view.
/// Throws NoMatchSite when the template does not match the view.
std::vector<Application> apply_template(const syntax::Node& program, const BuggyProgramView& view,
                                        const ViewSite& site, const FixTemplate& tpl);

struct CodePrompt {
  std::string template_id;
  std::string text;     // the whole patched file, masks in place of holes
  std::string context;  // the rewritten lines with surrounding lines
  std::size_t mask_count = 0;
  std::vector<syntax::HoleSlot> slots;  // one per mask, in order
  std::string text_with_sentinels;      // masks as private markers, for filling
};

inline constexpr std::size_t kMaxMasks = 100;

std::string mask_token(std::size_t index);

/// Renders the application against the original source text: the rewritten
/// statements replace the original lines, everything else is kept verbatim
/// (the whole file is re-rendered when the site shares lines with other code).
/// Throws TooManyMasks above `max_masks` holes, GrammarViolation when the
/// rewritten code cannot be rendered.
CodePrompt render_prompt(const Application& app, const std::string& source, std::size_t context_lines = 5,
                         std::size_t max_masks = kMaxMasks);

/// A syntactically neutral stand-in for a hole of the given slot.
std::string placeholder_for(const syntax::HoleSlot& slot);

/// Substitutes fills for the masks of the prompt text.
std::string fill_prompt(const CodePrompt& prompt, const std::vector<std::string>& fills);

struct FillResult {
  std::vector<std::string> fills;
  double score = 0;
};

class FillerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Proposes fills for the masks of a prompt: at most `beam` results, each
/// with exactly mask_count fills.
class MaskFiller {
 public:
  virtual ~MaskFiller() = default;
  virtual std::vector<FillResult> fill(const CodePrompt& prompt, std::size_t beam) = 0;
};

/// Replays a fixed list of results, keeping those with the right arity.
class TableFiller : public MaskFiller {
 public:
  explicit TableFiller(std::vector<FillResult> results) : results_(std::move(results)) {}
  /// Reads {"results": [{"fills": [...], "score": s}, ...]}.
  static TableFiller from_json(const std::string& text);
  std::vector<FillResult> fill(const CodePrompt& prompt, std::size_t beam) override;

 private:
  std::vector<FillResult> results_;
};

/// Fills every mask with its placeholder: one result per prompt.
class EchoFiller : public MaskFiller {
 public:
  std::vector<FillResult> fill(const CodePrompt& prompt, std::size_t beam) override;
};

/// Wraps a filler and adds, for every result, a copy whose fills are
/// corrupted so that the patch cannot parse.
class FaultInjectingFiller : public MaskFiller {
 public:
  static constexpr const char* kCorruption = "(((";
  explicit FaultInjectingFiller(MaskFiller& inner) : inner_(inner) {}
  std::vector<FillResult> fill(const CodePrompt& prompt, std::size_t beam) override;

 private:
  MaskFiller& inner_;
};

/// JSON over HTTP: POST {prompt, mask_count, beam} to the URL, expecting
/// {results: [{fills, score}]}.
class HttpFiller : public MaskFiller {
 public:
  explicit HttpFiller(std::string url, std::chrono::seconds timeout = std::chrono::seconds(60));
  std::vector<FillResult> fill(const CodePrompt& prompt, std::size_t beam) override;

 private:
  std::string base_;
  std::string path_;
  std::chrono::seconds timeout_;
};

enum class PatchStatus { Generated, SyntaxOk, Plausible };
std::string_view to_string(PatchStatus s);

struct CandidatePatch {
  std::string id;
  std::string template_id;
  std::string text;
  std::vector<std::string> fills;
  double score = 0;
  PatchStatus status = PatchStatus::Generated;
  std::string note;  // why validation stopped, if it did
};

struct TemplateError {
  std::string template_id;
  std::string message;
};

struct Generation {
  std::vector<CodePrompt> prompts;
  std::vector<CandidatePatch> candidates;
  std::vector<TemplateError> errors;
};

struct GenerationOptions {
  std::size_t beam = 50;
  std::size_t max_templates = 20;
  std::size_t context_lines = 5;
};

/// Templates in rank order, each applied at every site, rendered and filled;
/// candidates keep (template rank, descending score) order and are unique by
/// text. Filler failures are recorded per template.
Generation generate_patches(const std::string& source, const BuggyProgramView& view, const ViewSite& site,
                            const RankedTemplates& ranked, MaskFiller& filler, const GenerationOptions& options = {});

class SandboxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValidationOptions {
  std::filesystem::path project_dir;  // copied, never written
  std::filesystem::path file;         // patched file, relative to the project
  std::string test_command;           // run with /bin/sh -c in the sandbox
  std::filesystem::path workdir;      // sandboxes go to <workdir>/<candidate-id>/
  std::chrono::seconds timeout{300};
};

/// Parse-checks every candidate, then runs the test command on a copy of the
/// project for each syntax_ok one. Order is preserved.
std::vector<CandidatePatch> validate(std::vector<CandidatePatch> patches, const ValidationOptions& options);

/// Runs a shell command in `cwd`; returns its exit status, or -1 on timeout.
int run_with_timeout(const std::string& command, const std::filesystem::path& cwd, std::chrono::seconds timeout);

/// [{candidate_id, template_id, status, score}, ...]
std::string manifest_json(const std::vector<CandidatePatch>& patches);

}  // namespace tyfix
