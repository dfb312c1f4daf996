#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "mitodet/core/error.hpp"
#include "mitodet/core/fs.hpp"
#include "mitodet/core/image_io.hpp"
#include "mitodet/core/pmap.hpp"
#include "mitodet/infer/scorer.hpp"

namespace mitodet::infer {
namespace {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

class WorkDir {
 public:
  WorkDir() {
    std::string pattern = (fs::temp_directory_path() / "mitodet-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
      fail(ErrorKind::kIo, "cannot create scorer work directory");
    }
    path_ = pattern;
  }
  ~WorkDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  WorkDir(const WorkDir&) = delete;
  WorkDir& operator=(const WorkDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

class ExternalScorer final : public Scorer {
 public:
  ExternalScorer(ScorerMode mode, std::string command)
      : mode_(mode), command_(std::move(command)), id_("external:" + command_) {}

  const std::string& id() const override { return id_; }
  ScorerMode mode() const override { return mode_; }
  bool parallel_safe() const override { return false; }
  std::size_t batch_size() const override { return 0; }

  std::vector<ProbMap> segment(std::span<const Tile> tiles) const override {
    if (mode_ != ScorerMode::kSegmentation) return Scorer::segment(tiles);
    WorkDir dir;
    run(dir.path(), tiles);
    std::vector<ProbMap> out;
    out.reserve(tiles.size());
    for (const auto& t : tiles) {
      const fs::path file = dir.path() / (t.id + ".pmap");
      std::error_code ec;
      if (!fs::is_regular_file(file, ec)) {
        fail(ErrorKind::kScorer, "external scorer did not write " + file.filename().string());
      }
      out.push_back(read_pmap(file));
    }
    return out;
  }

  std::vector<double> classify(std::span<const Tile> tiles) const override {
    if (mode_ != ScorerMode::kClassification) return Scorer::classify(tiles);
    WorkDir dir;
    run(dir.path(), tiles);
    const fs::path file = dir.path() / "scores.json";
    nlohmann::json scores;
    try {
      scores = nlohmann::json::parse(read_text(file));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kScorer, std::string("external scorer: bad scores.json: ") + e.what());
    } catch (const Error& e) {
      fail(ErrorKind::kScorer, std::string("external scorer: ") + e.what());
    }
    std::vector<double> out;
    out.reserve(tiles.size());
    for (const auto& t : tiles) {
      if (!scores.is_object() || !scores.contains(t.id) || !scores[t.id].is_number()) {
        fail(ErrorKind::kScorer, "external scorer: scores.json lacks a score for '" + t.id + "'");
      }
      out.push_back(scores[t.id].get<double>());
    }
    return out;
  }

 private:
  void run(const fs::path& dir, std::span<const Tile> tiles) const {
    nlohmann::json manifest;
    manifest["mode"] = mode_ == ScorerMode::kSegmentation ? "segmentation" : "classification";
    manifest["tiles"] = nlohmann::json::array();
    for (const auto& t : tiles) {
      const std::string file = t.id + ".png";
      save_png(dir / file, t.image);
      manifest["tiles"].push_back({{"id", t.id},
                                   {"file", file},
                                   {"width", t.image.width()},
                                   {"height", t.image.height()},
                                   {"frame",
                                    {{"offset_x", t.frame.offset_x},
                                     {"offset_y", t.frame.offset_y},
                                     {"step_x", t.frame.step_x},
                                     {"step_y", t.frame.step_y}}}});
    }
    write_file_atomic(dir / "batch.json", manifest.dump(2));

    const std::string cmd = command_ + " " + shell_quote(dir.string());
    const int status = std::system(cmd.c_str());
    if (status == -1) fail(ErrorKind::kScorer, "cannot launch external scorer '" + command_ + "'");
    if (WIFSIGNALED(status)) {
      fail(ErrorKind::kScorer, "external scorer '" + command_ + "' killed by signal " +
                                   std::to_string(WTERMSIG(status)));
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
      fail(ErrorKind::kScorer, "external scorer '" + command_ + "' exited with code " +
                                   std::to_string(WEXITSTATUS(status)));
    }
  }

  ScorerMode mode_;
  std::string command_;
  std::string id_;
};

}  // namespace

ScorerPtr make_external_scorer(ScorerMode mode, std::string command) {
  if (command.empty()) fail(ErrorKind::kInvalidArgument, "external scorer: empty command");
  return std::make_shared<ExternalScorer>(mode, std::move(command));
}

}  // namespace mitodet::infer
